#ifndef QPERIOD_LINALG_HPP
#define QPERIOD_LINALG_HPP

#include <vector>

#include "qperiod/numeric.hpp"

namespace qp {

using RealVector = std::vector<Real>;
using RealMatrix = std::vector<std::vector<Real>>;  // small, dense, row-major

Real dot(const RealVector& a, const RealVector& b);
Real norm2(const RealVector& a);

// In-place Cholesky A = L L^T on the lower triangle. Returns false when a
// pivot is non-positive (matrix not positive definite).
bool cholesky_factor(RealMatrix& a);
RealVector cholesky_solve(const RealMatrix& l, const RealVector& b);

// det(A) from its Cholesky factor, and the leading principal minors
// det(A_k) = prod_{i<k} L_ii^2 -- the positive-definiteness certificate.
Real cholesky_det(const RealMatrix& l);
RealVector cholesky_leading_minors(const RealMatrix& l);

// Ordinary least squares min ||X beta - y||_2 over double data; the fits in
// this project sit far above double noise. Normal equations with partial
// pivoting, deterministic evaluation order.
struct LinearFit {
    std::vector<double> coef;
    double max_abs_residual = 0;
    double rms_residual = 0;
};
LinearFit least_squares(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& y);

// Slope/intercept convenience for y ~ a + b x.
struct LineFit {
    double intercept = 0;
    double slope = 0;
    double max_abs_residual = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qp

#endif  // QPERIOD_LINALG_HPP

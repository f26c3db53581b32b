#ifndef QPERIOD_CONIFOLD_HPP
#define QPERIOD_CONIFOLD_HPP

#include "qperiod/laurent.hpp"
#include "qperiod/linalg.hpp"
#include "qperiod/numeric.hpp"
#include "qperiod/walk.hpp"

namespace qp {

// Critical point of f on the positive orthant. In log coordinates y = log x
// the objective F(y) = sum c_l exp(l.y) is smooth, strictly convex and
// coercive for convenient f, so the minimizer is unique.
struct ConifoldResult {
    RealVector point;      // x_con, all coordinates > 0
    Real value;            // T_con = f(x_con)
    Real hessian_log_det;  // det of d^2 f / (dlog x_i dlog x_j) at x_con
    Real gradient_norm;    // achieved ||grad F|| / F(y*), relative residual
    int iterations = 0;
};

struct ConifoldOptions {
    unsigned precision_bits = kDefaultPrecisionBits;
    int tol_log2 = -200;  // stop when ||grad F|| <= 2^tol_log2 * F(y)
    int max_iter = 200;
};

// Damped Newton with Armijo backtracking from y = 0. Throws validation_error
// on non-convenient input and on non-convergence within max_iter.
ConifoldResult find_conifold(const LaurentPolynomial& f, const ConifoldOptions& opts = {});

// Step probabilities p_l = c_l x_con^l / T_g for the support of g. The mean
// vanishes up to the conifold gradient residual.
StepDistribution step_distribution(const LaurentPolynomial& g, const ConifoldResult& conifold,
                                   unsigned precision_bits = kDefaultPrecisionBits);

}  // namespace qp

#endif  // QPERIOD_CONIFOLD_HPP

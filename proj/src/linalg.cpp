#include "qperiod/linalg.hpp"

#include <cmath>
#include <cstddef>

namespace qp {

Real dot(const RealVector& a, const RealVector& b) {
    Real s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Real norm2(const RealVector& a) {
    return sqrt(dot(a, a));
}

bool cholesky_factor(RealMatrix& a) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        Real d = a[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j][k] * a[j][k];
        if (d <= 0) return false;
        a[j][j] = sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            Real s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i][k] * a[j][k];
            a[i][j] = s / a[j][j];
        }
    }
    return true;
}

RealVector cholesky_solve(const RealMatrix& l, const RealVector& b) {
    const std::size_t n = l.size();
    RealVector y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
        y[i] = s / l[i][i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        Real s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k][ii] * x[k];
        x[ii] = s / l[ii][ii];
    }
    return x;
}

Real cholesky_det(const RealMatrix& l) {
    Real d = 1;
    for (std::size_t i = 0; i < l.size(); ++i) d *= l[i][i] * l[i][i];
    return d;
}

RealVector cholesky_leading_minors(const RealMatrix& l) {
    RealVector minors(l.size());
    Real d = 1;
    for (std::size_t i = 0; i < l.size(); ++i) {
        d *= l[i][i] * l[i][i];
        minors[i] = d;
    }
    return minors;
}

LinearFit least_squares(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& y) {
    const std::size_t n = rows.size();
    if (n == 0 || rows[0].empty() || y.size() != n)
        throw validation_error("least_squares: empty or mismatched data");
    const std::size_t p = rows[0].size();
    if (n < p) throw validation_error("least_squares: fewer samples than parameters");

    std::vector<std::vector<double>> ata(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b) ata[a][b] += rows[i][a] * rows[i][b];
            ata[a][p] += rows[i][a] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting on the augmented system.
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::fabs(ata[r][col]) > std::fabs(ata[piv][col])) piv = r;
        if (ata[piv][col] == 0.0) throw validation_error("least_squares: singular normal equations");
        std::swap(ata[piv], ata[col]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            double f = ata[r][col] / ata[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= p; ++c) ata[r][c] -= f * ata[col][c];
        }
    }
    LinearFit fit;
    fit.coef.resize(p);
    for (std::size_t a = 0; a < p; ++a) fit.coef[a] = ata[a][p] / ata[a][a];

    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double pred = 0;
        for (std::size_t a = 0; a < p; ++a) pred += fit.coef[a] * rows[i][a];
        double r = y[i] - pred;
        ss += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(r));
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::vector<double>> rows;
    rows.reserve(x.size());
    for (double xi : x) rows.push_back({1.0, xi});
    LinearFit f = least_squares(rows, y);
    return {f.coef[0], f.coef[1], f.max_abs_residual};
}

}  // namespace qp

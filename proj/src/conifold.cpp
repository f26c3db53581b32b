#include "qperiod/conifold.hpp"

#include <cstddef>

namespace qp {

namespace {

struct Objective {
    // Exponents as Real matrices once, coefficients as Real.
    std::vector<RealVector> exps;
    RealVector coeffs;
    int m;

    explicit Objective(const LaurentPolynomial& f) : m(f.num_vars()) {
        for (const auto& t : f.terms()) {
            RealVector e(m);
            for (int i = 0; i < m; ++i) e[i] = Real(t.exp[i]);
            exps.push_back(std::move(e));
            coeffs.push_back(to_real(t.coeff));
        }
    }

    // Value, gradient and Hessian of F(y) = sum c_l exp(l.y) in one sweep.
    // The largest exponent l.y is factored out of the accumulation and
    // multiplied back, which keeps lopsided models inside range.
    void eval(const RealVector& y, Real& value, RealVector& grad, RealMatrix& hess) const {
        const std::size_t k = exps.size();
        RealVector ly(k);
        Real shift = 0;
        for (std::size_t t = 0; t < k; ++t) {
            ly[t] = dot(exps[t], y);
            if (t == 0 || ly[t] > shift) shift = ly[t];
        }
        value = 0;
        grad.assign(m, Real(0));
        hess.assign(m, RealVector(m, Real(0)));
        for (std::size_t t = 0; t < k; ++t) {
            Real w = coeffs[t] * exp(ly[t] - shift);
            value += w;
            for (int i = 0; i < m; ++i) {
                grad[i] += w * exps[t][i];
                for (int j = 0; j <= i; ++j) hess[i][j] += w * exps[t][i] * exps[t][j];
            }
        }
        Real scale = exp(shift);
        value *= scale;
        for (int i = 0; i < m; ++i) {
            grad[i] *= scale;
            for (int j = 0; j <= i; ++j) {
                hess[i][j] *= scale;
                hess[j][i] = hess[i][j];
            }
        }
    }
};

}  // namespace

ConifoldResult find_conifold(const LaurentPolynomial& f, const ConifoldOptions& opts) {
    ScopedPrecision prec(opts.precision_bits);

    if (!is_convenient(f))
        throw validation_error("find_conifold: model is not convenient "
                               "(Newton polytope must contain the origin in its interior)");

    const int m = f.num_vars();
    Objective obj(f);
    Real tol = ldexp(Real(1), opts.tol_log2);

    RealVector y(m, Real(0));
    Real value;
    RealVector grad;
    RealMatrix hess;
    obj.eval(y, value, grad, hess);

    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        Real gnorm = norm2(grad);
        if (gnorm <= tol * value) break;

        RealMatrix l = hess;
        if (!cholesky_factor(l))
            throw validation_error("find_conifold: Hessian not positive definite "
                                   "(degenerate support)");
        RealVector step = cholesky_solve(l, grad);
        for (auto& s : step) s = -s;

        // Armijo backtracking with halving.
        Real slope = dot(grad, step);  // < 0
        Real t = 1;
        RealVector y_next(m);
        Real v_next;
        RealVector g_next;
        RealMatrix h_next;
        bool accepted = false;
        for (int half = 0; half < 80; ++half) {
            for (int i = 0; i < m; ++i) y_next[i] = y[i] + t * step[i];
            obj.eval(y_next, v_next, g_next, h_next);
            if (v_next <= value + (t / 4) * slope) { accepted = true; break; }
            t /= 2;
        }
        if (!accepted)
            throw validation_error("find_conifold: line search failed to make progress");
        y = y_next;
        value = v_next;
        grad = g_next;
        hess = h_next;
    }

    Real gnorm = norm2(grad);
    if (gnorm > tol * value)
        throw validation_error("find_conifold: no convergence within max_iter; "
                               "achieved relative gradient " + format_real(gnorm / value, 8));

    ConifoldResult res;
    res.point.resize(m);
    for (int i = 0; i < m; ++i) res.point[i] = exp(y[i]);
    res.value = value;
    RealMatrix l = hess;
    if (!cholesky_factor(l))
        throw validation_error("find_conifold: Hessian not positive definite at minimizer");
    res.hessian_log_det = cholesky_det(l);
    res.gradient_norm = gnorm / value;
    res.iterations = iter;
    return res;
}

StepDistribution step_distribution(const LaurentPolynomial& g, const ConifoldResult& conifold,
                                   unsigned precision_bits) {
    ScopedPrecision prec(precision_bits);
    const int m = g.num_vars();
    if (static_cast<int>(conifold.point.size()) != m)
        throw validation_error("step_distribution: conifold result has wrong dimension");

    RealVector log_x(m);
    for (int i = 0; i < m; ++i) log_x[i] = log(conifold.point[i]);

    StepDistribution dist;
    dist.dim = m;
    for (const auto& t : g.terms()) {
        Real ly = 0;
        for (int i = 0; i < m; ++i) ly += Real(t.exp[i]) * log_x[i];
        Real p = to_real(t.coeff) * exp(ly) / conifold.value;
        dist.steps.emplace_back(t.exp, p);
    }
    dist.lattice_rank = newton_info(g).support_lattice_rank;
    return dist;
}

}  // namespace qp

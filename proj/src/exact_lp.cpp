#include "qperiod/exact_lp.hpp"

#include <cstddef>

namespace qp::lp {

namespace {

// Dense simplex tableau: rows = constraints, one objective row at the end.
// Column layout: structural vars, then artificials, then the RHS.
struct Tableau {
    std::size_t rows, cols;  // cols excludes RHS
    std::vector<std::vector<Rational>> t;
    std::vector<std::size_t> basis;  // basic column per row

    Rational& at(std::size_t r, std::size_t c) { return t[r][c]; }
    Rational& rhs(std::size_t r) { return t[r][cols]; }
    Rational& obj(std::size_t c) { return t[rows][c]; }
    Rational& obj_rhs() { return t[rows][cols]; }

    void pivot(std::size_t pr, std::size_t pc) {
        Rational p = at(pr, pc);
        for (std::size_t c = 0; c <= cols; ++c) t[pr][c] /= p;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            Rational f = t[r][pc];
            if (f == 0) continue;
            for (std::size_t c = 0; c <= cols; ++c) t[r][c] -= f * t[pr][c];
        }
        basis[pr] = pc;
    }

    // Bland's rule: entering = lowest-index column with positive reduced
    // profit, leaving = lowest-index tying ratio. Returns false when optimal,
    // throws on unboundedness.
    bool step(std::size_t usable_cols) {
        std::size_t pc = cols;
        for (std::size_t c = 0; c < usable_cols; ++c) {
            if (obj(c) > 0) { pc = c; break; }
        }
        if (pc == cols) return false;
        std::size_t pr = rows;
        Rational best;
        for (std::size_t r = 0; r < rows; ++r) {
            if (at(r, pc) <= 0) continue;
            Rational ratio = rhs(r) / at(r, pc);
            if (pr == rows || ratio < best || (ratio == best && basis[r] < basis[pr])) {
                pr = r;
                best = ratio;
            }
        }
        if (pr == rows) throw unbounded_signal{};
        pivot(pr, pc);
        return true;
    }

    struct unbounded_signal {};
};

}  // namespace

Result maximize_equality_form(const std::vector<std::vector<Rational>>& a,
                              const std::vector<Rational>& b,
                              const std::vector<Rational>& c) {
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    Tableau tab;
    tab.rows = m;
    tab.cols = n + m;  // structural + one artificial per row
    tab.t.assign(m + 1, std::vector<Rational>(tab.cols + 1, Rational(0)));
    tab.basis.assign(m, 0);

    for (std::size_t r = 0; r < m; ++r) {
        bool flip = b[r] < 0;
        for (std::size_t cidx = 0; cidx < n; ++cidx)
            tab.at(r, cidx) = flip ? -a[r][cidx] : a[r][cidx];
        tab.rhs(r) = flip ? -b[r] : b[r];
        tab.at(r, n + r) = 1;
        tab.basis[r] = n + r;
    }

    // Phase 1: maximize -(sum of artificials).
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t cidx = 0; cidx <= tab.cols; ++cidx)
            tab.t[m][cidx] += tab.t[r][cidx];
    for (std::size_t r = 0; r < m; ++r) tab.obj(n + r) = 0;

    try {
        while (tab.step(tab.cols)) {}
    } catch (const Tableau::unbounded_signal&) {
        // Phase-1 objective is bounded by construction.
        return {Status::Infeasible, Rational(0), {}};
    }
    if (tab.obj_rhs() != 0) return {Status::Infeasible, Rational(0), {}};

    // Drive leftover artificials out of the basis (degenerate rows).
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        std::size_t pc = n;
        for (std::size_t cidx = 0; cidx < n; ++cidx) {
            if (tab.at(r, cidx) != 0) { pc = cidx; break; }
        }
        if (pc < n) tab.pivot(r, pc);
        // A row with no structural entry is redundant; its artificial stays
        // basic at value zero, which is harmless with artificial columns
        // barred from re-entering below.
    }

    // Phase 2 objective.
    for (std::size_t cidx = 0; cidx <= tab.cols; ++cidx) tab.t[m][cidx] = 0;
    for (std::size_t cidx = 0; cidx < n; ++cidx) tab.obj(cidx) = c[cidx];
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] >= n) continue;
        Rational f = tab.obj(tab.basis[r]);
        if (f == 0) continue;
        for (std::size_t cidx = 0; cidx <= tab.cols; ++cidx)
            tab.t[m][cidx] -= f * tab.t[r][cidx];
    }

    try {
        while (tab.step(n)) {}
    } catch (const Tableau::unbounded_signal&) {
        return {Status::Unbounded, Rational(0), {}};
    }

    Result res;
    res.status = Status::Optimal;
    res.x.assign(n, Rational(0));
    for (std::size_t r = 0; r < m; ++r)
        if (tab.basis[r] < n) res.x[tab.basis[r]] = tab.rhs(r);
    res.objective = 0;
    for (std::size_t cidx = 0; cidx < n; ++cidx) res.objective += c[cidx] * res.x[cidx];
    return res;
}

bool is_feasible(const std::vector<std::vector<Rational>>& a,
                 const std::vector<Rational>& b) {
    std::vector<Rational> c(a.empty() ? 0 : a[0].size(), Rational(0));
    return maximize_equality_form(a, b, c).status == Status::Optimal;
}

}  // namespace qp::lp

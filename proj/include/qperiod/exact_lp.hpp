#ifndef QPERIOD_EXACT_LP_HPP
#define QPERIOD_EXACT_LP_HPP

#include <vector>

#include "qperiod/numeric.hpp"

namespace qp::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status;
    Rational objective;       // valid when status == Optimal
    std::vector<Rational> x;  // primal solution, valid when status == Optimal
};

// Solves max c.x subject to A x = b, x >= 0 in exact rational arithmetic.
// Two-phase tableau simplex with Bland's rule, so it terminates on any
// input. Problem sizes here are tiny (Newton polytopes of Laurent
// polynomials), exactness is the point.
Result maximize_equality_form(const std::vector<std::vector<Rational>>& a,
                              const std::vector<Rational>& b,
                              const std::vector<Rational>& c);

// Feasibility of {A x = b, x >= 0}.
bool is_feasible(const std::vector<std::vector<Rational>>& a,
                 const std::vector<Rational>& b);

}  // namespace qp::lp

#endif  // QPERIOD_EXACT_LP_HPP

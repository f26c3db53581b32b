#ifndef QPERIOD_WALK_HPP
#define QPERIOD_WALK_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "qperiod/laurent.hpp"
#include "qperiod/numeric.hpp"

namespace qp {

// Zero-mean step distribution on the support lattice of an index-one model:
// p_l = c_l x_con^l / T_g.
struct StepDistribution {
    int dim = 0;
    std::vector<std::pair<Exponent, Real>> steps;
    int lattice_rank = 0;
};

// Return probabilities q_{n'} = Cst(g^{n'}) / T_g^{n'} for n' = 0..n_max.
// The numerators are exact rationals; only the division by T_g^{n'} happens
// in floating point. Requires detect_index(g) == 1.
std::vector<Real> return_probabilities(const LaurentPolynomial& g, const Real& t_g,
                                       int n_max, unsigned precision_bits = kDefaultPrecisionBits);

// Same sequence computed from the underlying model f with index r, i.e.
// q_{n'} = Cst(f^{r n'}) / t_con^{r n'}. Equivalent to the g = f^r form but
// lets cst_sequence use f's structure; for simplex supports this is the only
// practical route to n' in the hundreds.
std::vector<Real> return_probabilities(const LaurentPolynomial& f, int index_r,
                                       const Real& t_con, int n_max,
                                       unsigned precision_bits = kDefaultPrecisionBits);

inline int default_lclt_fit_start(int n_max) { return std::max(10, n_max / 4); }

// Least-squares realization of q_{n'} ~ n'^{-m/2} (c + b / sqrt(n')).
struct LcltFit {
    std::vector<std::pair<int, Real>> samples;  // (n', q_{n'}), positive entries only
    Real c_hat;                 // extrapolated limit of q_{n'} n'^{m/2}
    double b_hat = 0;           // fitted 1/sqrt(n') correction
    double residual_exponent = 0;  // slope of log|q n^{m/2} - c_hat| vs log n
    double m_over_2_check = 0;     // slope of log q vs log n, expect -m/2
    int n_min_fit = 0;
    int dim = 0;
};

LcltFit fit_lclt(const std::vector<Real>& q, int m, int n_min_fit);

// splitmix64: the 64-bit counter-based generator used for all stochastic
// tests. Each (seed, trial) pair owns an independent stream, so results are
// identical for a fixed seed no matter how trials are scheduled.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0,1) with 53 random bits
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial);

struct MonteCarloResult {
    double estimate = 0;
    double std_error = 0;
    std::int64_t hits = 0;
    std::int64_t trials = 0;
};

// Fraction of seeded trials whose n_steps-step sum returns to the origin,
// with the binomial standard error.
MonteCarloResult monte_carlo_return(const StepDistribution& dist, int n_steps,
                                    std::int64_t n_trials, std::uint64_t seed);

}  // namespace qp

#endif  // QPERIOD_WALK_HPP

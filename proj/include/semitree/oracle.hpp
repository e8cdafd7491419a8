#pragma once

#include <cstdint>
#include <vector>

#include "semitree/rational.hpp"
#include "semitree/types.hpp"

namespace semitree {

// Distance-to-target chain of the simple random walk. The target vertex has
// class target_parity; a vertex at distance d has class target_parity for even
// d and the opposite class for odd d. From distance d >= 1 the walk steps down
// with probability 1/(q(d) + 1).
struct BirthDeathChain {
    TreeParams params;
    Parity target_parity;

    BirthDeathChain(const TreeParams& t, Parity target) : params(t), target_parity(target) {}

    int q_at(int d) const {
        return params.q(d % 2 == 0 ? target_parity : opposite(target_parity));
    }
    Rational p_down(int d) const { return Rational(1, q_at(d) + 1); }
    Rational p_up(int d) const { return Rational(q_at(d), q_at(d) + 1); }
};

// f[n] = exact probability that the walk started at distance 1 from the target
// first reaches it at step n, for n = 0..N (f[0] = 0, and f[n] = 0 for even n).
// The start vertex has class opposite(target_parity), so this is the coefficient
// sequence of F^s with s = opposite(target_parity).
std::vector<Rational> first_passage_coefficients(const TreeParams& t, Parity target_parity, int N);

// p[n] = exact probability of being back at the start vertex (the root, class
// given by params) after n steps; start_distance shifts the start along a ray.
std::vector<Rational> return_probabilities(const TreeParams& t, int N, int start_distance = 0);

// Partial sum of sum_n f[n] gamma^(-n) with a geometric tail estimate fitted to
// the last retained terms. Converges for |gamma| > b; `converged` reports both
// that condition and Cauchy behavior of the partial sums.
struct SeriesEstimate {
    cplx value{};
    double tail_bound = 0;  // estimated modulus of the dropped tail
    double term_ratio = 0;  // fitted geometric ratio of consecutive nonzero terms
    bool converged = false;
};
SeriesEstimate F_series(const TreeParams& t, Parity target_parity, cplx gamma, int N);

// G(x, v0 | gamma) = sum_n p^(n)(x, v0) gamma^(-n-1) truncated at N, for x at
// start_distance from the root.
SeriesEstimate green_series(const TreeParams& t, cplx gamma, int N, int start_distance = 0);

// Monte Carlo estimate of the probability that the walk from distance 1 ever
// hits the target (start vertex of class `start`; equals F^start(1)). Walks are
// simulated in fixed-size blocks whose RNG streams depend only on (seed, block
// index), so results are identical for any worker count. Walks still unabsorbed
// after step_cap steps are reported separately, not extrapolated.
struct MonteCarloResult {
    double estimate = 0;    // absorbed fraction
    double std_error = 0;   // binomial standard error
    double unabsorbed = 0;  // fraction that hit the step cap
    std::uint64_t walks = 0;
};
MonteCarloResult monte_carlo_hitting(const TreeParams& t, Parity start, std::uint64_t walks,
                                     std::uint64_t seed, std::uint64_t step_cap = 10000,
                                     int threads = 0);

// Walks an explicit depth-N truncation vertex by vertex, forms each interior
// neighborhood average of the radial profile at gamma, and returns
// max over interior v of |mu1 f(v) - gamma f(v)| / (1 + |gamma f(v)|).
double eigen_residual(const TreeParams& t, cplx gamma, int N, int threads = 0);

// Growth diagnosis of sum_n |S(n)| |phi_n|^p from partial sums: fits the
// geometric ratio of the last terms and compares it with 1 ± margin.
enum class GrowthVerdict : unsigned char { summable, divergent, inconclusive };
struct LpDiagnostic {
    std::vector<double> partial_sums; // cumulative, one entry per depth
    double growth_ratio = 0;          // fitted ratio of consecutive terms
    GrowthVerdict verdict = GrowthVerdict::inconclusive;
    double margin = 0;
};
LpDiagnostic lp_partial_sums(const TreeParams& t, cplx gamma, double p, int N,
                             double margin = 0.02);

} // namespace semitree

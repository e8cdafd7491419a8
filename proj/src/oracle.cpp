#include "semitree/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

#include "semitree/branch.hpp"
#include "semitree/spherical.hpp"
#include "semitree/tree.hpp"

namespace semitree {

namespace {

constexpr int kMaxSeriesLength = 100000;

void check_series_length(int N) {
    if (N < 0) throw std::invalid_argument("series length must be >= 0");
    if (N > kMaxSeriesLength)
        throw CapacityError("series length " + std::to_string(N) + " exceeds the limit " +
                            std::to_string(kMaxSeriesLength));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return int(std::clamp(hw, 1u, 8u));
}

// Geometric fit of the dropped tail from the moduli of retained terms (already
// restricted to the nonzero lattice, spacing 2 for the parity-killed series).
struct TailFit {
    double ratio = 0;   // per-term ratio across the nonzero lattice
    double bound = 0;   // estimated modulus of the dropped tail
    bool usable = false;
};

TailFit fit_tail(const std::vector<double>& mags) {
    TailFit fit;
    const size_t n = mags.size();
    if (n < 6) return fit;
    const size_t span = std::min<size_t>(5, n - 1);
    const double head = mags[n - 1 - span];
    const double last = mags[n - 1];
    if (!(head > 0) || !(last > 0)) return fit;
    fit.ratio = std::pow(last / head, 1.0 / double(span));
    fit.usable = true;
    if (fit.ratio < 1.0) fit.bound = last * fit.ratio / (1.0 - fit.ratio);
    else fit.bound = std::numeric_limits<double>::infinity();
    return fit;
}

} // namespace

std::vector<Rational> first_passage_coefficients(const TreeParams& t, Parity target_parity,
                                                 int N) {
    check_series_length(N);
    const BirthDeathChain chain(t, target_parity);
    std::vector<Rational> f(size_t(N) + 1, Rational(0));
    // cur[d] = probability of being at distance d, not yet absorbed.
    std::vector<Rational> cur(size_t(N) + 2, Rational(0));
    std::vector<Rational> nxt(size_t(N) + 2, Rational(0));
    if (N >= 1) cur[1] = Rational(1);
    for (int step = 1; step <= N; ++step) {
        f[size_t(step)] = cur[1] * chain.p_down(1);
        std::fill(nxt.begin(), nxt.end(), Rational(0));
        const int dmax = std::min(step + 1, N + 1);
        for (int d = 1; d <= dmax; ++d) {
            if (cur[size_t(d)] == Rational(0)) continue;
            if (d >= 2) nxt[size_t(d) - 1] += cur[size_t(d)] * chain.p_down(d);
            // Mass pushed beyond N + 1 can no longer return in time; drop it.
            if (d + 1 <= N + 1) nxt[size_t(d) + 1] += cur[size_t(d)] * chain.p_up(d);
        }
        cur.swap(nxt);
    }
    return f;
}

std::vector<Rational> return_probabilities(const TreeParams& t, int N, int start_distance) {
    check_series_length(N);
    if (start_distance < 0)
        throw std::invalid_argument("return_probabilities: start_distance must be >= 0");
    const BirthDeathChain chain(t, t.root_parity); // distances measured from the root
    std::vector<Rational> p(size_t(N) + 1, Rational(0));
    std::vector<Rational> cur(size_t(N) + start_distance + 2, Rational(0));
    std::vector<Rational> nxt(cur.size(), Rational(0));
    cur[size_t(start_distance)] = Rational(1);
    if (start_distance == 0) p[0] = Rational(1);
    const int dcap = int(cur.size()) - 1;
    for (int step = 1; step <= N; ++step) {
        std::fill(nxt.begin(), nxt.end(), Rational(0));
        if (cur[0] != Rational(0)) nxt[1] += cur[0]; // the root moves out with probability 1
        for (int d = 1; d <= dcap; ++d) {
            if (cur[size_t(d)] == Rational(0)) continue;
            nxt[size_t(d) - 1] += cur[size_t(d)] * chain.p_down(d);
            if (d + 1 <= dcap) nxt[size_t(d) + 1] += cur[size_t(d)] * chain.p_up(d);
        }
        cur.swap(nxt);
        p[size_t(step)] = cur[0];
    }
    return p;
}

SeriesEstimate F_series(const TreeParams& t, Parity target_parity, cplx gamma, int N) {
    const std::vector<Rational> f = first_passage_coefficients(t, target_parity, N);
    const cplx ig = 1.0 / gamma;
    SeriesEstimate est;
    cplx g_pow(1, 0);
    std::vector<double> mags;
    for (int n = 1; n <= N; ++n) {
        g_pow *= ig;
        if (f[size_t(n)] == Rational(0)) continue;
        const cplx term = to_double(f[size_t(n)]) * g_pow;
        est.value += term;
        mags.push_back(std::abs(term));
    }
    const TailFit fit = fit_tail(mags);
    est.term_ratio = fit.ratio;
    est.tail_bound = fit.bound;
    const double b = endpoints(t).b;
    est.converged = fit.usable && std::abs(gamma) > b && fit.ratio < 1.0;
    return est;
}

SeriesEstimate green_series(const TreeParams& t, cplx gamma, int N, int start_distance) {
    const std::vector<Rational> p = return_probabilities(t, N, start_distance);
    const cplx ig = 1.0 / gamma;
    SeriesEstimate est;
    cplx g_pow = ig; // gamma^(-n-1) at n = 0
    std::vector<double> mags;
    for (int n = 0; n <= N; ++n) {
        if (p[size_t(n)] != Rational(0)) {
            const cplx term = to_double(p[size_t(n)]) * g_pow;
            est.value += term;
            mags.push_back(std::abs(term));
        }
        g_pow *= ig;
    }
    const TailFit fit = fit_tail(mags);
    est.term_ratio = fit.ratio;
    est.tail_bound = fit.bound;
    est.converged = fit.usable && std::abs(gamma) > endpoints(t).b && fit.ratio < 1.0;
    return est;
}

MonteCarloResult monte_carlo_hitting(const TreeParams& t, Parity start, std::uint64_t walks,
                                     std::uint64_t seed, std::uint64_t step_cap, int threads) {
    constexpr std::uint64_t block_size = 4096;
    const std::uint64_t nblocks = (walks + block_size - 1) / block_size;
    const int nthreads = int(std::min<std::uint64_t>(std::uint64_t(resolve_threads(threads)),
                                                     std::max<std::uint64_t>(nblocks, 1)));

    const std::uint64_t q_odd = std::uint64_t(t.q(start));            // degree at odd distances
    const std::uint64_t q_even = std::uint64_t(t.q(opposite(start))); // degree at even distances

    std::vector<std::uint64_t> absorbed(size_t(nthreads), 0);
    std::vector<std::uint64_t> capped(size_t(nthreads), 0);

    auto run_block = [&](std::uint64_t block, std::uint64_t& abs_acc, std::uint64_t& cap_acc) {
        const std::uint64_t lo = block * block_size;
        const std::uint64_t hi = std::min(lo + block_size, walks);
        std::mt19937_64 rng(splitmix64(seed ^ (block * 0x9E3779B97F4A7C15ULL + 1)));
        for (std::uint64_t w = lo; w < hi; ++w) {
            std::uint64_t d = 1;
            bool odd = true;
            bool hit = false;
            for (std::uint64_t s = 0; s < step_cap; ++s) {
                const std::uint64_t q = odd ? q_odd : q_even;
                if (rng() % (q + 1) == 0) {
                    if (--d == 0) {
                        hit = true;
                        break;
                    }
                } else {
                    ++d;
                }
                odd = !odd;
            }
            if (hit) ++abs_acc;
            else ++cap_acc;
        }
    };

    auto worker = [&](int k) {
        for (std::uint64_t block = std::uint64_t(k); block < nblocks;
             block += std::uint64_t(nthreads))
            run_block(block, absorbed[size_t(k)], capped[size_t(k)]);
    };

    if (nthreads <= 1) {
        if (nblocks > 0) worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(size_t(nthreads));
        for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker, k);
        for (auto& th : pool) th.join();
    }

    std::uint64_t total_abs = 0, total_cap = 0;
    for (int k = 0; k < nthreads; ++k) {
        total_abs += absorbed[size_t(k)];
        total_cap += capped[size_t(k)];
    }

    MonteCarloResult res;
    res.walks = walks;
    if (walks > 0) {
        res.estimate = double(total_abs) / double(walks);
        res.unabsorbed = double(total_cap) / double(walks);
        res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) / double(walks));
    }
    return res;
}

double eigen_residual(const TreeParams& t, cplx gamma, int N, int threads) {
    const TruncatedTree tree = build_truncated_tree(t, N);
    const RadialProfile prof = recurrence_eval(t, gamma, N);

    const int nthreads = resolve_threads(threads);

    // Visit [lo, hi) level by level so depths never need a per-vertex lookup.
    auto for_levels = [&](std::int64_t lo, std::int64_t hi, auto&& body) {
        int d = tree.depth_of(lo);
        std::int64_t v = lo;
        while (v < hi) {
            const std::int64_t seg_end = std::min(hi, tree.level_end(d));
            body(d, v, seg_end);
            v = seg_end;
            ++d;
        }
    };

    auto parallel_range = [&](std::int64_t end, auto&& chunk_fn) {
        if (end <= 0) return;
        const int nt = int(std::min<std::int64_t>(nthreads, std::max<std::int64_t>(end / 4096, 1)));
        if (nt <= 1) {
            chunk_fn(std::int64_t(0), end);
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(size_t(nt));
        const std::int64_t step = (end + nt - 1) / nt;
        for (int k = 0; k < nt; ++k) {
            const std::int64_t lo = std::int64_t(k) * step;
            const std::int64_t hi = std::min(end, lo + step);
            if (lo >= hi) break;
            pool.emplace_back([&chunk_fn, lo, hi] { chunk_fn(lo, hi); });
        }
        for (auto& th : pool) th.join();
    };

    // Interior vertices are exactly those at depths 0..N-1. The field being
    // radial, the value at a vertex is prof[depth]; materializing it per index
    // would triple the runtime on memory traffic without checking anything the
    // per-vertex walk below does not.
    const std::int64_t interior = N >= 1 ? tree.level_end(N - 1) : 0;

    std::vector<double> maxima(size_t(nthreads), 0.0);
    std::atomic<int> slot{0};
    std::atomic<bool> layout_ok{true};

    parallel_range(interior, [&](std::int64_t lo, std::int64_t hi) {
        const int my = slot.fetch_add(1);
        double local = 0;
        for_levels(lo, hi, [&](int d, std::int64_t from, std::int64_t to) {
            const std::int64_t br = tree.branching(d);
            const double inv_deg = 1.0 / double(d == 0 ? br : br + 1);
            const cplx parent_val = d == 0 ? cplx(0, 0) : prof.values[size_t(d - 1)];
            const cplx child_val = prof.values[size_t(d + 1)];
            const cplx target = gamma * prof.values[size_t(d)];
            const std::int64_t next_lo = tree.level_begin(d + 1);
            const std::int64_t next_hi = tree.level_end(d + 1);
            for (std::int64_t v = from; v < to; ++v) {
                const auto ch = tree.children(v, d);
                if (ch.begin < next_lo || ch.end > next_hi)
                    layout_ok.store(false, std::memory_order_relaxed);
                // Two alternating accumulators keep the add chain short.
                cplx acc0 = parent_val, acc1 = cplx(0, 0);
                for (std::int64_t c = ch.begin; c < ch.end; c += 2) acc0 += child_val;
                for (std::int64_t c = ch.begin + 1; c < ch.end; c += 2) acc1 += child_val;
                const double res =
                    std::abs((acc0 + acc1) * inv_deg - target) / (1.0 + std::abs(target));
                if (res > local) local = res;
            }
        });
        if (my < nthreads) maxima[size_t(my)] = std::max(maxima[size_t(my)], local);
    });

    if (!layout_ok.load())
        throw std::logic_error("eigen_residual: children range escapes the next level");

    double out = 0;
    for (double m : maxima) out = std::max(out, m);
    return out;
}

LpDiagnostic lp_partial_sums(const TreeParams& t, cplx gamma, double p, int N, double margin) {
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("lp_partial_sums: need a finite exponent p >= 1");
    check_series_length(N);
    const RadialProfile prof = recurrence_eval(t, gamma, N);
    const double lq = std::log(t.qm());
    const double qr = double(t.q_root());
    const double qa = double(t.q_alt());

    LpDiagnostic diag;
    diag.margin = margin;
    diag.partial_sums.reserve(size_t(N) + 1);

    std::vector<std::pair<int, double>> logterms; // (n, log of sphere-weighted term)
    double running = 0;
    for (int n = 0; n <= N; ++n) {
        const double mag = std::abs(prof.values[size_t(n)]);
        if (mag > 1e-300) {
            double log_card = 0;
            if (n >= 1) {
                log_card = std::log(qr + 1.0) + double(n - 1) * lq;
                if (n % 2 == 0) log_card += std::log(qa) - lq;
            }
            const double lt = log_card + p * std::log(mag);
            logterms.emplace_back(n, lt);
            running += std::exp(lt);
        }
        diag.partial_sums.push_back(running);
    }

    // Least-squares slope of log-term against depth over the last window.
    const size_t total = logterms.size();
    const size_t K = std::min<size_t>(64, total / 2);
    if (K >= 4) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = total - K; i < total; ++i) {
            const double x = double(logterms[i].first);
            const double y = logterms[i].second;
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double k = double(K);
        const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        diag.growth_ratio = std::exp(slope);
        if (diag.growth_ratio < 1.0 - margin) diag.verdict = GrowthVerdict::summable;
        else if (diag.growth_ratio > 1.0 + margin) diag.verdict = GrowthVerdict::divergent;
        else diag.verdict = GrowthVerdict::inconclusive;
    }
    return diag;
}

} // namespace semitree

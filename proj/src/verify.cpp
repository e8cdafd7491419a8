#include "semitree/verify.hpp"

#include <cmath>
#include <random>

#include "semitree/branch.hpp"
#include "semitree/oracle.hpp"
#include "semitree/spectra.hpp"
#include "semitree/spherical.hpp"
#include "semitree/tree.hpp"

namespace semitree {

namespace {

const TreeParams kPairs[] = {
    TreeParams(2, 2), TreeParams(2, 3), TreeParams(3, 5), TreeParams(5, 2), TreeParams(2, 7),
};

// Deterministic off-cut sample: radius in [0.05, 3], any angle, kept away from
// the closed cuts by 0.02.
std::vector<cplx> sample_gammas(const TreeParams& t, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad(0.05, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.141592653589793);
    const auto [a, b] = endpoints(t);
    std::vector<cplx> out;
    out.reserve(size_t(count));
    while (int(out.size()) < count) {
        const double r = rad(rng);
        const double th = ang(rng);
        const cplx g(r * std::cos(th), r * std::sin(th));
        if (std::abs(g.imag()) < 0.02 && std::abs(g.real()) > a - 0.02 &&
            std::abs(g.real()) < b + 0.02)
            continue;
        out.push_back(g);
    }
    return out;
}

struct Acc {
    double worst = 0;
    void feed(double r) {
        if (std::abs(r) > worst) worst = std::abs(r);
    }
    void feed(cplx r) { feed(std::abs(r)); }
};

CheckResult make(const std::string& name, double residual, double tol) {
    return {name, residual, tol, residual <= tol};
}

} // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    const double bump = 1.0 + opt.perturb;

    // Algebraic identities of the branch quantities over a seeded grid.
    {
        Acc prod, quad, fprod, resolvent, parity, swap_sym, kappa_sum;
        int pi = 0;
        for (const TreeParams& t : kPairs) {
            const TreeParams swapped(t.q_minus, t.q_plus);
            const double qq = t.qm();
            for (cplx g : sample_gammas(t, opt.seed + 11 * pi, opt.gammas_per_pair)) {
                const BranchData d = evaluate_branch(t, g);
                const cplx B = d.B * bump;
                prod.feed(B * d.Bt - 1.0);
                const cplx nh = double(t.D()) * g * g;
                quad.feed(B * B - ((nh - double(t.q_plus + t.q_minus)) / qq) * B + 1.0);

                const double cp = double(t.q_minus + 1) / (double(t.q_minus) * double(t.q_plus + 1));
                const double cm = double(t.q_plus + 1) / (double(t.q_plus) * double(t.q_minus + 1));
                fprod.feed(d.F_plus.value * d.Ft_plus.value - cp);
                fprod.feed(d.F_minus.value * d.Ft_minus.value - cm);

                const cplx ff = d.F_plus.value * d.F_minus.value;
                resolvent.feed(g * d.F_plus.value -
                               (1.0 + double(t.q_plus) * ff) / double(t.q_plus + 1));
                resolvent.feed(g * d.F_minus.value -
                               (1.0 + double(t.q_minus) * ff) / double(t.q_minus + 1));

                const BranchData dm = evaluate_branch(t, -g);
                parity.feed(dm.F_plus.value + d.F_plus.value);
                parity.feed(dm.R - d.R);
                parity.feed(dm.B - d.B);

                const BranchData ds = evaluate_branch(swapped, g);
                swap_sym.feed(ds.B - d.B);
                swap_sym.feed(ds.F_plus.value - d.F_minus.value);

                if (std::abs(d.B - 1.0) > 1e-3 && std::abs(d.B + 1.0) > 1e-3) {
                    const SphericalCoefficients sc = coefficients(t, g);
                    kappa_sum.feed(sc.kappa_even + sc.kappat_even - 1.0);
                    kappa_sum.feed(sc.kappa_odd + sc.kappat_odd - g);
                }
            }
            ++pi;
        }
        out.push_back(make("identity-B-Bt-product", prod.worst, 1e-10));
        out.push_back(make("identity-B-quadratic", quad.worst, 1e-10));
        out.push_back(make("identity-F-Ft-product", fprod.worst, 1e-10));
        out.push_back(make("identity-resolvent", resolvent.worst, 1e-10));
        out.push_back(make("identity-parity", parity.worst, 1e-10));
        out.push_back(make("identity-class-swap", swap_sym.worst, 1e-10));
        out.push_back(make("identity-kappa-sum", kappa_sum.worst, 1e-9));
    }

    // Three independent spherical evaluators agree.
    {
        Acc agree;
        int pi = 0;
        for (const TreeParams& t : kPairs) {
            for (cplx g : sample_gammas(t, opt.seed + 101 * pi + 7, 12)) {
                const RadialProfile rec = recurrence_eval(t, g, 20);
                for (int n = 0; n <= 20; n += (n < 4 ? 1 : 3)) {
                    const double scale = 1.0 + std::abs(rec.values[size_t(n)]);
                    agree.feed(std::abs(closed_form(t, g, n) - rec.values[size_t(n)]) / scale);
                    agree.feed(std::abs(arc_sum_eval(t, g, n) - rec.values[size_t(n)]) / scale);
                }
            }
            ++pi;
        }
        out.push_back(make("spherical-three-evaluators", agree.worst, 1e-9));
    }

    // Exact combinatorics: partition masses sum to one, census matches the
    // sphere formulas, mu2 matches its mu1 expression.
    {
        Acc part_sum, census, mu2c;
        for (const TreeParams& base : kPairs) {
            for (Parity root : {Parity::plus, Parity::minus}) {
                const TreeParams t(base.q_plus, base.q_minus, root);
                for (int n = 0; n <= 30; n += 5) {
                    Rational s(0);
                    for (const Rational& m : arc_partition(t, n).nu) s += m;
                    part_sum.feed(s == Rational(1) ? 0.0 : 1.0);
                }
                const TruncatedTree tree = build_truncated_tree(t, 7);
                for (int d = 0; d <= 7; ++d) {
                    const BigInt expect = sphere_cardinality(t, d);
                    const BigInt got = tree.level_end(d) - tree.level_begin(d);
                    census.feed(expect == got ? 0.0 : 1.0);
                }
                std::mt19937_64 rng(opt.seed + 13);
                std::uniform_real_distribution<double> u(-1.0, 1.0);
                std::vector<cplx> field(size_t(tree.size()));
                for (auto& x : field) x = cplx(u(rng), u(rng));
                const MaskedField m1 = apply_mu1(tree, field);
                const MaskedField m11 = apply_mu1(tree, m1.values);
                const MaskedField m2 = apply_mu2(tree, field);
                for (std::int64_t v = 0; v < tree.level_end(5); ++v) {
                    const double qt = double(t.q(opposite(tree.parity_of(v))));
                    const cplx expect =
                        ((qt + 1.0) / qt) * m11.values[size_t(v)] - field[size_t(v)] / qt;
                    mu2c.feed(m2.values[size_t(v)] - expect);
                }
            }
        }
        out.push_back(make("arc-partition-total-mass", part_sum.worst, 0.0));
        out.push_back(make("sphere-census", census.worst, 0.0));
        out.push_back(make("mu2-from-mu1", mu2c.worst, 1e-12));
    }

    // Boundary values on the cuts keep |B| = 1 and the closed-form |F|.
    {
        Acc cutmod;
        for (const TreeParams& t : kPairs) {
            const auto [a, b] = endpoints(t);
            for (double f : {0.15, 0.5, 0.85}) {
                for (double s : {1.0, -1.0}) {
                    const double x = s * (a + f * (b - a));
                    const BranchData d = branch_cut_limit(t, x);
                    cutmod.feed(std::abs(d.B) - 1.0);
                    const double fp = std::sqrt(double(t.D())) /
                                      (std::sqrt(double(t.q_minus)) * double(t.q_plus + 1));
                    const double fm = std::sqrt(double(t.D())) /
                                      (std::sqrt(double(t.q_plus)) * double(t.q_minus + 1));
                    cutmod.feed(std::abs(d.F_plus.value) - fp);
                    cutmod.feed(std::abs(d.F_minus.value) - fm);
                    // The open-set values converge to the cut limit from above.
                    const BranchData up = evaluate_branch(t, cplx(x, 1e-9));
                    cutmod.feed(std::abs(up.B - d.B) > 1e-3 ? 1.0 : 0.0);
                }
            }
        }
        out.push_back(make("cut-boundary-values", cutmod.worst, 1e-9));
    }

    // Degenerate continuity: the mode formula approaches the linear-in-n
    // profiles near gamma = ±b and ±a.
    {
        Acc cont;
        for (const TreeParams& t : kPairs) {
            const auto [a, b] = endpoints(t);
            std::vector<double> pts = {b, -b};
            if (!t.homogeneous()) {
                pts.push_back(a);
                pts.push_back(-a);
            }
            for (double x : pts) {
                for (double off : {1e-6, -1e-6}) {
                    const cplx g(x + off, 0);
                    if (on_cut(t, g)) continue;
                    for (int n : {6, 13, 20}) {
                        const cplx exact = closed_form(t, cplx(x, 0), n);
                        cont.feed(std::abs(closed_form(t, g, n) - exact) /
                                  (1.0 + std::abs(exact)));
                    }
                }
            }
        }
        out.push_back(make("degenerate-continuity", cont.worst, 1e-3));
    }

    // Eigenvalue map round trips and hits its landmarks.
    {
        Acc zmap;
        int pi = 0;
        for (const TreeParams& t : kPairs) {
            const auto [a, b] = endpoints(t);
            const double lq = std::log(t.qm());
            zmap.feed(gamma_squared_of_z(t, cplx(0.5, 0)) - cplx(b * b, 0));
            zmap.feed(gamma_squared_of_z(t, cplx(0.5, 3.141592653589793 / (2 * lq))) -
                      cplx(a * a, 0));
            zmap.feed(gamma_squared_of_z(t, cplx(0, 0)) - cplx(1, 0));
            for (cplx g : sample_gammas(t, opt.seed + 23 * pi + 3, 10)) {
                const cplx z = z_of_gamma(t, g);
                zmap.feed((gamma_squared_of_z(t, z) - g * g) / (1.0 + std::abs(g * g)));
            }
            ++pi;
        }
        out.push_back(make("z-map-roundtrip", zmap.worst, 1e-9));
    }

    // Spectrum geometry: foci, radius landmarks, boundary consistency.
    {
        Acc foci, radius, bmod, nonell;
        for (const TreeParams& t : kPairs) {
            const auto [a, b] = endpoints(t);
            for (double p : {1.0, 1.2, 1.5, 2.0, 3.0, 6.0,
                             std::numeric_limits<double>::infinity()}) {
                const EllipseRegion e = sigma_p(t, p);
                foci.feed(e.focus_low - a * a);
                foci.feed(e.focus_high - b * b);
                const double u = std::abs(1.0 - 2.0 / (std::isinf(p) ? 1e300 : p));
                for (const BoundaryPoint& bp : boundary_curve(t, p, 17)) {
                    if (on_cut(t, bp.gamma_sheet1)) continue;
                    // B is continuous but not Lipschitz at the branch points, so
                    // one ulp of curve rounding costs sqrt(ulp) there. The p = 2
                    // curve ends exactly at gamma = b; measure only clear of the
                    // closed cut.
                    const double x = std::abs(bp.gamma_sheet1.real());
                    const double dx = std::max({0.0, a - x, x - b});
                    if (std::hypot(dx, bp.gamma_sheet1.imag()) < 1e-9) continue;
                    const BPair bbp = B_of_gamma(t, bp.gamma_sheet1);
                    bmod.feed(std::abs(bbp.B) - std::pow(t.qm(), -u));
                }
                const double eta = e.center, al = e.semi_real, be = e.semi_imag;
                const double residual = eta * eta + be * be - al * al;
                const double expect = std::pow(double(t.q_plus - t.q_minus) / double(t.D()), 2);
                nonell.feed(residual - expect);
            }
            radius.feed(spectral_radius(t, 1.0) - 1.0);
            radius.feed(spectral_radius(t, std::numeric_limits<double>::infinity()) - 1.0);
            radius.feed(spectral_radius(t, 2.0) - b);
        }
        out.push_back(make("sigma-p-foci", foci.worst, 1e-12));
        out.push_back(make("spectral-radius-landmarks", radius.worst, 1e-14));
        out.push_back(make("boundary-B-modulus", bmod.worst, 1e-9));
        out.push_back(make("non-ellipticity-residual", nonell.worst, 1e-12));
    }

    // Homogeneous reduction: the classical one-parameter formulas.
    {
        Acc homf, homc;
        for (int q : {2, 3}) {
            const TreeParams t(q, q);
            for (cplx g : sample_gammas(t, opt.seed + q, 20)) {
                const cplx disc = std::sqrt(double((q + 1) * (q + 1)) * g * g - 4.0 * q);
                const cplx r1 = (double(q + 1) * g - disc) / (2.0 * q);
                const cplx r2 = (double(q + 1) * g + disc) / (2.0 * q);
                const cplx fref = std::abs(r1) <= std::abs(r2) ? r1 : r2;
                homf.feed(hitting_F(t, g, Parity::plus).value - fref);
            }
            const double lnq = std::log(double(q));
            for (cplx z : {cplx(0.7, 0.0), cplx(0.85, 0.35)}) {
                const auto qp = [&](cplx e) { return std::exp(e * lnq); };
                const cplx g = (qp(z) + qp(1.0 - z)) / double(q + 1);
                const auto c = [&](cplx zz) {
                    return (qp(1.0 - zz) - qp(zz - 1.0)) / (double(q + 1) * (qp(-zz) - qp(zz - 1.0)));
                };
                for (int n = 0; n <= 24; n += 4) {
                    const cplx ref = c(z) * qp(-z * double(n)) + c(1.0 - z) * qp(-(1.0 - z) * double(n));
                    homc.feed((closed_form(t, g, n) - ref) / (1.0 + std::abs(ref)));
                }
            }
        }
        out.push_back(make("homogeneous-F-formula", homf.worst, 1e-10));
        out.push_back(make("homogeneous-c-of-z-form", homc.worst, 1e-10));
    }

    // Oracle spot checks: series against closed forms, detailed balance of the
    // first-passage and Green routes, eigen residual on an explicit tree.
    {
        Acc orc;
        const TreeParams t52(5, 2);
        const SeriesEstimate fp = F_series(t52, Parity::minus, cplx(1, 0), 200);
        orc.feed(fp.value - cplx(0.25, 0)); // F^+(1) = (q-+1)/((q++1) q-)
        const SeriesEstimate fm = F_series(t52, Parity::plus, cplx(1, 0), 200);
        orc.feed(fm.value - cplx(0.4, 0)); // F^-(1) = (q++1)/((q-+1) q+)
        for (const TreeParams& t : {TreeParams(2, 3), TreeParams(5, 2)}) {
            const cplx g(2.2, 0.3);
            const SeriesEstimate gr = green_series(t, g, 260);
            const cplx fdown = hitting_F(t, g, opposite(t.root_parity)).value;
            orc.feed((gr.value - 1.0 / (g - fdown)) * (g - fdown));
            orc.feed(eigen_residual(t, cplx(1.25, 0.4), 8) / 1e-6);
        }
        out.push_back(make("oracle-series-vs-closed-form", orc.worst, 1e-6));
    }

    // Negative control: K^z with z off the critical lattice must fail the
    // eigenfunction equation by a visible margin at the depth-1 vertex.
    {
        const TreeParams t(3, 5);
        const cplx z(0.3, 0.1);
        const double qr = double(t.q_root()), qa = double(t.q_alt());
        const double qq = t.qm();
        const double c0 = (qr + 1) * std::sqrt(qa) / ((qa + 1) * std::sqrt(qr));
        const auto cpow = [](double base, cplx e) { return std::exp(e * std::log(base)); };
        const cplx u0 = cpow(c0, z) * (cpow(qq, z) + qr * cpow(qq, -z)) / (qr + 1);
        const cplx u1 = (qa + cpow(qq, 2.0 * z)) / (qa + 1);
        const cplx k1 = cpow(c0 * qq, z); // K^z at the ray vertex of depth 1
        const double deviation = std::abs(u1 - u0 * k1) / (1.0 + std::abs(u0 * k1));
        const double residual = deviation > 1e-3 ? 0.0 : 1e-3 - deviation;
        out.push_back(make("kz-non-eigenfunction-margin", residual, 0.0));
    }

    return out;
}

} // namespace semitree

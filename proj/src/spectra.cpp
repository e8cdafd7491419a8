#include "semitree/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "semitree/branch.hpp"

namespace semitree {

namespace {

bool is_zero(cplx z) { return z.real() == 0.0 && z.imag() == 0.0; }

double inv_p(double p) {
    if (std::isinf(p)) return 0.0;
    if (!(p >= 1.0))
        throw std::invalid_argument("exponent p must satisfy p >= 1 (use inf for l-infinity)");
    return 1.0 / p;
}

// u = |1 - 2/p| = |1/p' - 1/p|, the quantity every p-dependent radius runs on.
double u_of_p(double p) { return std::abs(1.0 - 2.0 * inv_p(p)); }

} // namespace

double EllipseRegion::functional(cplx z) const {
    return std::abs(z - cplx(focus_low, 0)) + std::abs(z - cplx(focus_high, 0));
}

cplx Gamma_of_z(const TreeParams& t, cplx z, Parity side) {
    const double qq2 = double(t.q_product()); // qm^2
    const auto pw = [&](cplx e) { return std::exp(e * std::log(qq2)); };
    const double qo = double(t.q(opposite(side)));
    const double denom = (double(t.q(side)) + 1.0) * qo;
    return (pw(z) + pw(cplx(1, 0) - z) + (qo - 1.0)) / denom;
}

EllipseRegion mu2_region(const TreeParams& t, double p, Parity side) {
    const double u = u_of_p(p);
    const double lq = std::log(t.qm());
    const double qq = t.qm();
    const double qo = double(t.q(opposite(side)));
    const double denom = (double(t.q(side)) + 1.0) * qo;
    EllipseRegion e;
    e.center = (qo - 1.0) / denom;
    e.semi_real = 2.0 * qq * std::cosh(u * lq) / denom;
    e.semi_imag = 2.0 * qq * std::sinh(u * lq) / denom;
    const double fd = 2.0 * qq / denom; // sqrt(semi_real^2 - semi_imag^2), p-free
    e.focus_low = e.center - fd;
    e.focus_high = e.center + fd;
    return e;
}

EllipseRegion sigma_p(const TreeParams& t, double p) {
    // Affine image x -> (q_a x + 1)/(q_a + 1) of the mu2 region on the root
    // class; the foci land exactly on (a^2, b^2).
    const TreeParams canon = t.canonical();
    const EllipseRegion e2 = mu2_region(canon, p, Parity::plus);
    const double qa = double(canon.q_minus);
    const double s = qa / (qa + 1.0);
    EllipseRegion e;
    e.center = s * e2.center + 1.0 / (qa + 1.0);
    e.semi_real = s * e2.semi_real;
    e.semi_imag = s * e2.semi_imag;
    e.focus_low = s * e2.focus_low + 1.0 / (qa + 1.0);
    e.focus_high = s * e2.focus_high + 1.0 / (qa + 1.0);
    return e;
}

SpectrumQuery membership(const TreeParams& t, double p, cplx gamma) {
    const double u = u_of_p(p);
    const double lq = std::log(t.qm());
    SpectrumQuery q;
    q.p = p;
    q.gamma = gamma;

    const TreeParams canon = t.canonical();
    const bool p_is_two = (u == 0.0);

    if (is_zero(gamma)) {
        if (t.homogeneous())
            q.zero_status = ZeroStatus::not_isolated;
        else if (p_is_two || canon.q_plus < canon.q_minus)
            q.zero_status = ZeroStatus::in_spectrum;
        else
            q.zero_status = ZeroStatus::undetermined;

        if (p_is_two || t.homogeneous() || canon.q_plus < canon.q_minus) {
            q.verdict = Verdict::inside;
            return q;
        }
        // q_r > q_a, p != 2: no statement about the isolated point; fall through
        // and report the continuous region's answer, flagged undetermined.
    }

    // Normalized coordinates: delta = (Nh - (q+ + q-)) / (2 qm) maps the two
    // lobes onto the ellipse with foci ±1 and threshold 2 cosh(u ln qm).
    const cplx nh = double(t.D()) * gamma * gamma;
    const cplx delta = (nh - (double(t.q_plus) + double(t.q_minus))) / (2.0 * t.qm());
    const double s = std::abs(delta + 1.0) + std::abs(delta - 1.0);
    const double thr = 2.0 * std::cosh(u * lq);
    const double btol = 1e-12 * thr;
    q.margin = s - thr;

    if (p_is_two) {
        // Degenerate ellipse: the segment between the foci. Interior points of
        // the cuts count as inside; the four endpoints are the boundary.
        if (s - 2.0 <= btol) {
            const double near_focus = std::min(std::abs(delta - 1.0), std::abs(delta + 1.0));
            q.verdict = near_focus <= 1e-10 ? Verdict::boundary : Verdict::inside;
        } else {
            q.verdict = Verdict::outside;
        }
        return q;
    }

    if (std::abs(s - thr) <= btol)
        q.verdict = Verdict::boundary;
    else
        q.verdict = s < thr ? Verdict::inside : Verdict::outside;
    return q;
}

std::vector<BoundaryPoint> boundary_curve(const TreeParams& t, double p, int samples) {
    if (samples < 1) throw std::invalid_argument("boundary_curve: samples must be >= 1");
    const EllipseRegion e = sigma_p(t, p);
    std::vector<BoundaryPoint> out;
    out.reserve(size_t(samples));
    const double step = 2.0 * std::numbers::pi / double(samples);
    for (int i = 0; i < samples; ++i) {
        BoundaryPoint bp;
        bp.theta = step * double(i);
        bp.gamma_sq = cplx(e.center + e.semi_real * std::cos(bp.theta),
                           e.semi_imag * std::sin(bp.theta));
        bp.gamma_sheet1 = std::sqrt(bp.gamma_sq);
        bp.gamma_sheet2 = -bp.gamma_sheet1;
        out.push_back(bp);
    }
    return out;
}

double spectral_radius(const TreeParams& t, double p) {
    const double u = u_of_p(p);
    if (u == 1.0) return 1.0;                // p = 1 or p = inf
    if (u == 0.0) return endpoints(t).b;     // p = 2
    const double num =
        double(t.q_plus) + double(t.q_minus) + 2.0 * t.qm() * std::cosh(u * std::log(t.qm()));
    return std::sqrt(num / double(t.D()));
}

double p_crit(const TreeParams& t) {
    const TreeParams canon = t.canonical();
    return 1.0 + std::log(double(canon.q_plus)) / std::log(double(canon.q_minus));
}

double split_exponent(const TreeParams& t) {
    const double qmax = double(std::max(t.q_plus, t.q_minus));
    return std::log(double(t.q_product())) / std::log(qmax);
}

LpRange lp_range_of_spherical(const TreeParams& t, cplx gamma) {
    LpRange r;
    if (is_zero(gamma)) {
        r.kind = SphericalKind::zero;
        r.p_threshold = p_crit(t);
        r.bounded = true;
        return r;
    }
    if (on_cut(t, gamma))
        throw std::domain_error("lp_range_of_spherical: gamma lies strictly inside a branch cut");

    const SphericalCoefficients sc = coefficients(t, gamma);
    r.kind = sc.kind;
    if (sc.kind == SphericalKind::degenerate_plus || sc.kind == SphericalKind::degenerate_minus) {
        // |phi_n| ~ n qm^(-n/2) against sphere growth qm^n: summable iff p > 2.
        r.p_threshold = 2.0;
        r.bounded = true;
        return r;
    }

    // |B| <= 1 off the cuts; the decay deficit L = -log_qm |B| drives everything.
    const double L = -std::log(std::abs(sc.B)) / std::log(t.qm());
    if (std::abs(L - 1.0) <= 1e-14) {
        // |B| = 1/qm: phi is bounded (gamma = 1 is the model case) but the
        // sphere sums are flat for every finite p.
        r.p_threshold = std::numeric_limits<double>::infinity();
        r.bounded = true;
        r.empty = true;
    } else if (L > 1.0) {
        r.p_threshold = std::numeric_limits<double>::infinity();
        r.bounded = false;
        r.empty = true;
    } else {
        r.p_threshold = 2.0 / (1.0 - L);
        r.bounded = true;
    }
    return r;
}

} // namespace semitree

#include "semitree/spherical.hpp"

#include <cmath>
#include <stdexcept>

#include "semitree/branch.hpp"
#include "semitree/tree.hpp"

namespace semitree {

namespace {

bool is_zero(cplx z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Window around B = ±1 where the generic mode formula loses too many digits
// and the recurrence takes over.
constexpr double kDegenerateWindow = 1e-5;
// Distance at which gamma counts as sitting exactly on ±a or ±b.
constexpr double kEndpointTol = 1e-12;

SphericalKind classify_gamma(const TreeParams& t, cplx gamma) {
    if (is_zero(gamma)) return SphericalKind::zero;
    const auto [a, b] = endpoints(t);
    if (std::abs(gamma - cplx(b, 0)) <= kEndpointTol || std::abs(gamma + cplx(b, 0)) <= kEndpointTol)
        return SphericalKind::degenerate_plus;
    if (!t.homogeneous() &&
        (std::abs(gamma - cplx(a, 0)) <= kEndpointTol || std::abs(gamma + cplx(a, 0)) <= kEndpointTol))
        return SphericalKind::degenerate_minus;
    return SphericalKind::generic;
}

cplx kappa_of(const TreeParams& canon, cplx B) {
    const double qr = double(canon.q_plus);
    const double qa = double(canon.q_minus);
    const double qq = canon.qm();
    return qr * (B - 1.0 / qq) * (B + std::sqrt(qa / qr)) / ((qr + 1.0) * (B * B - 1.0));
}

} // namespace

RadialProfile recurrence_eval(const TreeParams& t, cplx gamma, int n_max) {
    if (n_max < 0) throw std::invalid_argument("recurrence_eval: n_max must be >= 0");
    RadialProfile rp{t, gamma, {}};
    rp.values.resize(size_t(n_max) + 1);
    rp.values[0] = cplx(1, 0);
    if (n_max == 0) return rp;
    rp.values[1] = gamma;
    for (int n = 1; n < n_max; ++n) {
        const double q = double(t.q_at_depth(n));
        rp.values[size_t(n) + 1] =
            ((q + 1.0) * gamma * rp.values[size_t(n)] - rp.values[size_t(n) - 1]) / q;
    }
    return rp;
}

SphericalCoefficients coefficients(const TreeParams& t, cplx gamma) {
    if (on_cut(t, gamma))
        throw std::domain_error("coefficients: gamma lies strictly inside a branch cut");
    const TreeParams canon = t.canonical();
    SphericalCoefficients sc;
    sc.kind = classify_gamma(canon, gamma);
    const BPair bb = B_of_gamma(canon, gamma);
    sc.B = bb.B;
    sc.Bt = bb.Bt;
    if (sc.kind != SphericalKind::generic) return sc;

    const cplx k = kappa_of(canon, sc.B);
    const cplx kt = kappa_of(canon, sc.Bt);
    sc.kappa_even = k;
    sc.kappat_even = kt;
    sc.kappa_odd = k * hitting_F(canon, gamma, Parity::minus).value;
    sc.kappat_odd = kt * hitting_Ft(canon, gamma, Parity::minus).value;
    return sc;
}

namespace {

// Linear-in-n profiles at the four degenerate points. sign is gamma/|gamma|
// (so ±1), minus_case selects B = -1 (gamma = ±a) over B = +1 (gamma = ±b).
cplx degenerate_value(const TreeParams& canon, double sign, bool minus_case, int n) {
    const double qr = double(canon.q_plus);
    const double qa = double(canon.q_minus);
    const double qq = canon.qm();
    const double e = minus_case ? -1.0 : 1.0;
    // Common slope factor (q_r/(q_r+1)) (e - 1/qm) (e + sqrt(q_a/q_r)), written
    // with e = ±1 so that both displays share one expression.
    const double slope = (qr / (qr + 1.0)) * (e - 1.0 / qq) * (e + std::sqrt(qa / qr));
    const auto [a, b] = endpoints(canon);
    const double g = sign * (minus_case ? a : b);

    const int m = (n % 2 == 0) ? n / 2 : (n - 1) / 2;
    double geo = std::pow(qq, -double(m)); // (e/qm)^m
    if (m % 2 == 1 && minus_case) geo = -geo;
    if (n % 2 == 0) return cplx(geo * (1.0 + slope * m), 0);
    // The odd amplitude carries F at the endpoint, where the root term R
    // vanishes identically: Nhat = q_r + q_a + 2 e qm collapses the quotient to
    // (q_r + e qm) / (q_r (q_a + 1) g). Evaluating hitting_F here instead
    // would reintroduce sqrt(eps) noise from the rounded radicand.
    const double fm = (qr + e * qq) / (qr * (qa + 1.0) * g);
    const double head = (qr + e * qq) / (qr + 1.0);
    return cplx(geo * (head + slope * m) * fm, 0);
}

} // namespace

cplx closed_form(const TreeParams& t, cplx gamma, int n) {
    if (n < 0) throw std::invalid_argument("closed_form: n must be >= 0");
    if (n == 0) return cplx(1, 0);
    if (on_cut(t, gamma))
        throw std::domain_error("closed_form: gamma lies strictly inside a branch cut");

    const TreeParams canon = t.canonical();
    const SphericalKind kind = classify_gamma(canon, gamma);

    if (kind == SphericalKind::zero) {
        if (n % 2 == 1) return cplx(0, 0);
        const double mag = std::pow(double(canon.q_minus), -0.5 * n);
        return cplx((n / 2) % 2 == 0 ? mag : -mag, 0);
    }
    if (kind != SphericalKind::generic) {
        const double sign = gamma.real() >= 0 ? 1.0 : -1.0;
        return degenerate_value(canon, sign, kind == SphericalKind::degenerate_minus, n);
    }

    const BPair bb = B_of_gamma(canon, gamma);
    if (std::abs(bb.B - 1.0) < kDegenerateWindow || std::abs(bb.B + 1.0) < kDegenerateWindow)
        return recurrence_eval(t, gamma, n).values[size_t(n)];

    const SphericalCoefficients sc = coefficients(t, gamma);
    const double qq = canon.qm();
    const int m = n / 2; // floor, also (n-1)/2 for odd n
    const cplx grow = pow_int(sc.B / qq, m);
    const cplx decay = pow_int(sc.Bt / qq, m);
    if (n % 2 == 0) return sc.kappa_even * grow + sc.kappat_even * decay;
    return sc.kappa_odd * grow + sc.kappat_odd * decay;
}

cplx arc_sum_eval(const TreeParams& t, cplx gamma, int n) {
    if (n < 0) throw std::invalid_argument("arc_sum_eval: n must be >= 0");
    if (is_zero(gamma))
        throw std::domain_error("arc_sum_eval: undefined at gamma = 0 (odd-class kernels degenerate)");
    if (on_cut(t, gamma))
        throw std::domain_error("arc_sum_eval: gamma lies strictly inside a branch cut");
    const double qr = double(t.q_root());
    const double qa = double(t.q_alt());
    const Parity v_class = t.parity_at_depth(n);
    // Arc masses computed directly in doubles; the exact-rational partition in
    // arc_partition is for callers that need the masses to telescope exactly,
    // and its big integers would dominate the runtime here.
    const auto mass = [&](int k) -> double {
        if (k == 0) return n == 0 ? 1.0 : qr / (qr + 1.0);
        if (k == n) {
            if (n % 2 == 0) return qr / (qr + 1.0) * std::pow(qr * qa, -0.5 * n);
            return qa / (qr + 1.0) * std::pow(qr, 0.5 * (1 - n)) * std::pow(qa, -0.5 * (n + 1));
        }
        if (k % 2 == 0) return (qr - 1.0) / (qr + 1.0) * std::pow(qr * qa, -0.5 * k);
        return (qa - 1.0) / (qr + 1.0) * std::pow(qr, 0.5 * (1 - k)) * std::pow(qa, -0.5 * (k + 1));
    };
    cplx sum(0, 0);
    for (int k = 0; k <= n; ++k) {
        const FValue kv = generalized_poisson(t, v_class, 2 * k - n, gamma);
        sum += kv.value * mass(k);
    }
    return sum;
}

cplx gamma_squared_of_z(const TreeParams& t, cplx z) {
    const double qp = double(t.q_plus);
    const double qm_deg = double(t.q_minus);
    const auto pw = [](double base, cplx e) { return std::exp(e * std::log(base)); };
    const cplx one_minus = cplx(1, 0) - z;
    return (pw(qp, z) + pw(qm_deg, one_minus)) * (pw(qm_deg, z) + pw(qp, one_minus)) /
           double(t.D());
}

cplx z_of_gamma(const TreeParams& t, cplx gamma) {
    const BPair bb = B_of_gamma(t, gamma);
    const cplx w = t.qm() * bb.Bt; // (Nh - (q+ + q-) + R) / 2, of modulus >= qm^... >= qm
    return std::log(w) / (2.0 * std::log(t.qm()));
}

} // namespace semitree

#include "semitree/branch.hpp"

#include <cmath>
#include <stdexcept>

#include "semitree/tree.hpp"

namespace semitree {

namespace {

// The shared ingredients: Nh = D gamma^2, the spectral abscissas
// s± = q+ + q- ± 2 qm, and the cut endpoints a^2 = s-/D, b^2 = s+/D.
struct Frame {
    double qp, qm_deg, qq; // q+, q-, qm = sqrt(q+ q-)
    double s_plus, s_minus;
    double D;
    cplx nh;
};

Frame frame_at(const TreeParams& t, cplx gamma) {
    Frame fr;
    fr.qp = double(t.q_plus);
    fr.qm_deg = double(t.q_minus);
    fr.qq = t.qm();
    fr.D = double(t.D());
    fr.s_plus = fr.qp + fr.qm_deg + 2 * fr.qq;
    fr.s_minus = fr.qp + fr.qm_deg - 2 * fr.qq;
    fr.nh = fr.D * gamma * gamma;
    return fr;
}

bool is_zero(cplx z) { return z.real() == 0.0 && z.imag() == 0.0; }

// Principal square root per std::sqrt: branch cut along the negative reals,
// nonnegative real part, sqrt(x + i0) on the cut edge for real x < 0 giving
// +i sqrt(|x|).
cplx psqrt(cplx z) { return std::sqrt(z); }

// sigma = +1 when the approach ray gamma = r*dir, r -> 0+, has psqrt(dir^2) = dir:
// the right half-plane plus the positive imaginary axis.
int direction_sign(cplx dir) {
    if (dir.real() > 0) return +1;
    if (dir.real() < 0) return -1;
    return dir.imag() > 0 ? +1 : -1;
}

} // namespace

SpectrumEndpoints endpoints(const TreeParams& t) {
    const double sp = std::sqrt(double(t.q_plus));
    const double sm = std::sqrt(double(t.q_minus));
    const double sd = std::sqrt(double(t.D()));
    return {std::abs(sp - sm) / sd, (sp + sm) / sd};
}

cplx quartic_W(const TreeParams& t, cplx gamma) {
    const Frame fr = frame_at(t, gamma);
    return (fr.nh - fr.s_plus) * (fr.nh - fr.s_minus);
}

bool on_cut(const TreeParams& t, cplx gamma) {
    if (gamma.imag() != 0.0) return false;
    const auto [a, b] = endpoints(t);
    const double x = std::abs(gamma.real());
    return x > a && x < b;
}

FValue root_R(const TreeParams& t, cplx gamma) {
    const Frame fr = frame_at(t, gamma);
    if (on_cut(t, gamma)) {
        // Upper half-plane limit: Nh is real in (s-, s+). Both factors of W are
        // real with one sign flip, so R is purely imaginary; the sign follows
        // the side of the cut (Im gamma^2 -> 0± for Re gamma positive/negative).
        const double mag =
            std::sqrt(fr.s_plus - fr.nh.real()) * std::sqrt(fr.nh.real() - fr.s_minus);
        const double sign = gamma.real() > 0 ? +1.0 : -1.0;
        return {cplx(0, sign * mag), BranchFlag::on_cut};
    }
    // Even in gamma, +sqrt(W) beyond b, continuous off the closed cuts: the two
    // principal roots flip together across gamma^2 < a^2 and cancel the jump.
    return {psqrt(fr.nh - fr.s_plus) * psqrt(fr.nh - fr.s_minus), BranchFlag::ok};
}

namespace {

FValue hitting_impl(const TreeParams& t, cplx gamma, Parity s, cplx direction, bool tilde) {
    const Frame fr = frame_at(t, gamma);
    const double q_s = double(t.q(s));
    const double q_o = double(t.q(opposite(s)));
    const double sgn = (s == Parity::plus) ? +1.0 : -1.0;

    if (is_zero(gamma)) {
        if (t.homogeneous()) {
            if (is_zero(direction)) return {cplx(0, 0), BranchFlag::needs_direction};
            const double r = direction_sign(direction) / std::sqrt(q_s);
            // F -> -i sigma / sqrt(q); the +R companion lands on the mirror value.
            return {tilde ? cplx(0, r) : cplx(0, -r), BranchFlag::ok};
        }
        const bool vanishes = tilde ? (q_s < q_o) : (q_s > q_o);
        if (vanishes) return {cplx(0, 0), BranchFlag::ok};
        return {cplx(0, 0), BranchFlag::pole};
    }

    const FValue R = root_R(t, gamma);
    const double rsign = tilde ? +1.0 : -1.0;
    const cplx num = fr.nh - sgn * (fr.qp - fr.qm_deg) + rsign * R.value;
    const cplx den = 2.0 * q_o * (q_s + 1.0) * gamma;
    return {num / den, R.flag};
}

} // namespace

FValue hitting_F(const TreeParams& t, cplx gamma, Parity s, cplx direction) {
    return hitting_impl(t, gamma, s, direction, false);
}

FValue hitting_Ft(const TreeParams& t, cplx gamma, Parity s, cplx direction) {
    return hitting_impl(t, gamma, s, direction, true);
}

BPair B_of_gamma(const TreeParams& t, cplx gamma) {
    const Frame fr = frame_at(t, gamma);
    const FValue R = root_R(t, gamma);
    const cplx mid = fr.nh - (fr.qp + fr.qm_deg);
    const cplx B = (mid - R.value) / (2.0 * fr.qq);
    const cplx Bt = (mid + R.value) / (2.0 * fr.qq);
    return {B, Bt, R.flag};
}

BranchData evaluate_branch(const TreeParams& t, cplx gamma, cplx direction) {
    BranchData d;
    d.gamma = gamma;
    d.W = quartic_W(t, gamma);
    const FValue R = root_R(t, gamma);
    d.R = R.value;
    d.flag = R.flag;
    d.F_plus = hitting_F(t, gamma, Parity::plus, direction);
    d.F_minus = hitting_F(t, gamma, Parity::minus, direction);
    d.Ft_plus = hitting_Ft(t, gamma, Parity::plus, direction);
    d.Ft_minus = hitting_Ft(t, gamma, Parity::minus, direction);
    const BPair bb = B_of_gamma(t, gamma);
    d.B = bb.B;
    d.Bt = bb.Bt;
    return d;
}

BranchData branch_cut_limit(const TreeParams& t, double x) {
    if (!on_cut(t, cplx(x, 0)))
        throw std::domain_error("branch_cut_limit: x does not lie strictly inside a cut");
    return evaluate_branch(t, cplx(x, 0));
}

cplx pow_int(cplx z, long long n) {
    if (n < 0) return 1.0 / pow_int(z, -n);
    cplx r(1, 0);
    while (n) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

double poisson_kernel(const TreeParams& t, int n, int k) {
    const int h = horospherical_index(k, n);
    const double qq = t.qm();
    const double base = std::pow(qq, double(h));
    if (n % 2 == 0) return base;
    const double qr = double(t.q_root());
    const double qa = double(t.q_alt());
    const double c0 = (qr + 1) * std::sqrt(qa) / ((qa + 1) * std::sqrt(qr));
    return base * c0;
}

namespace {

FValue kernel_impl(const TreeParams& t, Parity v_class, int h, cplx gamma, cplx direction,
                   bool tilde) {
    const bool even_class = (v_class == t.root_parity);
    const bool h_even = ((h % 2) == 0);
    if (even_class != h_even)
        throw std::invalid_argument(
            "generalized_poisson: horospherical index parity does not match the vertex class");

    const BPair bb = B_of_gamma(t, gamma);
    const cplx ff = (tilde ? bb.Bt : bb.B) / t.qm(); // F+F- or Ft+Ft-
    if (even_class) return {pow_int(ff, -h / 2), bb.flag};

    const FValue f = tilde ? hitting_Ft(t, gamma, v_class, direction)
                           : hitting_F(t, gamma, v_class, direction);
    if (!f.usable()) return {cplx(0, 0), f.flag};
    const cplx val = pow_int(ff, -(std::int64_t(h) + 1) / 2) * f.value;
    return {val, f.flag != BranchFlag::ok ? f.flag : bb.flag};
}

} // namespace

FValue generalized_poisson(const TreeParams& t, Parity v_class, int h, cplx gamma,
                           cplx direction) {
    return kernel_impl(t, v_class, h, gamma, direction, false);
}

FValue alt_generalized_poisson(const TreeParams& t, Parity v_class, int h, cplx gamma,
                               cplx direction) {
    return kernel_impl(t, v_class, h, gamma, direction, true);
}

} // namespace semitree

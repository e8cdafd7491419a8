#pragma once

#include "semitree/types.hpp"

namespace semitree {

// Endpoints of the two branch cuts (-b, -a) and (a, b) on the real axis:
// a = |sqrt(q+) - sqrt(q-)| / sqrt(D), b = (sqrt(q+) + sqrt(q-)) / sqrt(D).
struct SpectrumEndpoints {
    double a = 0, b = 0;
};
SpectrumEndpoints endpoints(const TreeParams& t);

// W(gamma) = (Nh - s+)(Nh - s-) with Nh = D * gamma^2 and s± = q+ + q- ± 2*qm.
// The discriminant whose square root all branch quantities share.
cplx quartic_W(const TreeParams& t, cplx gamma);

// True when gamma lies strictly inside one of the cuts.
bool on_cut(const TreeParams& t, cplx gamma);

enum class BranchFlag : unsigned char {
    ok,
    on_cut,          // value is the boundary limit from the upper half-plane
    pole,            // simple pole at gamma = 0 (value not usable)
    needs_direction, // homogeneous gamma = 0: limit depends on approach direction
};

struct FValue {
    cplx value{};
    BranchFlag flag = BranchFlag::ok;
    bool usable() const { return flag == BranchFlag::ok || flag == BranchFlag::on_cut; }
};

// The determination of sqrt(W) that is even in gamma, equal to +sqrt(W) for
// gamma > b, and continuous everywhere off the closed cuts (it equals
// -|q+ - q-| + O(gamma^2) near 0). On the open cuts the value is the limit from
// Im gamma > 0 and the flag says so.
FValue root_R(const TreeParams& t, cplx gamma);

// One-step hitting continuations. hitting_F(t, gamma, s) is the analytic
// continuation, decaying at infinity, of the generating function of first
// passage from a vertex of class s to a fixed neighbor; hitting_Ft is the
// companion determination with +R. At gamma = 0 the continuation has a simple
// pole when q_s < q_other, vanishes when q_s > q_other, and in the homogeneous
// case tends to -i*sigma/sqrt(q) where sigma = ±1 depends on the approach
// direction (pass a nonzero `direction`; the right half-plane and the positive
// imaginary axis give sigma = +1).
FValue hitting_F(const TreeParams& t, cplx gamma, Parity s, cplx direction = cplx(0, 0));
FValue hitting_Ft(const TreeParams& t, cplx gamma, Parity s, cplx direction = cplx(0, 0));

// B = qm * F+ * F- = (Nh - (q+ + q-) - R) / (2 qm) and its reciprocal Bt.
// Finite and nonzero for every gamma (B(0) = -min(q+,q-)/qm); |B| <= 1 with
// equality exactly on the closed cuts.
struct BPair {
    cplx B{}, Bt{};
    BranchFlag flag = BranchFlag::ok;
};
BPair B_of_gamma(const TreeParams& t, cplx gamma);

// Everything the branch determines at one gamma, computed consistently.
struct BranchData {
    cplx gamma{};
    cplx W{}, R{};
    FValue F_plus, F_minus, Ft_plus, Ft_minus;
    cplx B{}, Bt{};
    BranchFlag flag = BranchFlag::ok; // on_cut when gamma is on an open cut
};
BranchData evaluate_branch(const TreeParams& t, cplx gamma, cplx direction = cplx(0, 0));

// Boundary values on the open cuts, taken from the upper half-plane, in closed
// form (no numerical epsilon): for x in (a, b), R = +i sqrt(s+ - Nh) sqrt(Nh - s-),
// and the conjugate-reflected value for x in (-b, -a).
BranchData branch_cut_limit(const TreeParams& t, double x);

// Value of the harmonic Poisson kernel P(v, v0, omega) for |v| = n and omega in
// the arc Omega_k(v0, v): qm^h for even n and qm^h * c0 for odd n, with
// h = 2k - n and c0 = (q_r + 1) sqrt(q_a) / ((q_a + 1) sqrt(q_r)) built from the
// root-class degree q_r and the other degree q_a.
double poisson_kernel(const TreeParams& t, int n, int k);

// Generalized kernel K(v, v0, omega | gamma). Depends on v only through its
// class and the horospherical index h: (F+F-)^(-h/2) when v lies in the root's
// class (even |v|), and (F+F-)^(-(h+1)/2) * F^c for the other class c. Requires
// h = |v| mod 2; mismatched parity throws. K(.|1) is the harmonic kernel, and
// as gamma -> 0 the even-class values tend to (-1/max(q+,q-))^(-h/2).
FValue generalized_poisson(const TreeParams& t, Parity v_class, int h, cplx gamma,
                           cplx direction = cplx(0, 0));

// The companion kernel built from the Ft determinations instead:
// (Ft+Ft-)^(-h/2), resp. (Ft+Ft-)^(-(h+1)/2) * Ft^c. Satisfies K~(.|1) = 1 and
// K * K~ = qm^h (even class) or qm^h * (q_r+1) sqrt(q_a) / ((q_a+1) sqrt(q_r)) (odd).
FValue alt_generalized_poisson(const TreeParams& t, Parity v_class, int h, cplx gamma,
                               cplx direction = cplx(0, 0));

// z^n for integer n of either sign by repeated squaring.
cplx pow_int(cplx z, long long n);

} // namespace semitree

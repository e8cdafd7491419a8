#pragma once

#include <vector>

#include "semitree/types.hpp"

namespace semitree {

// phi(v, v0 | gamma) as a function of n = |v|, values[0..n_max]. Computed by the
// three-term recurrence f_{n+1} = ((q_n + 1) gamma f_n - f_{n-1}) / q_n with
// q_n the degree at depth n; defined for every complex gamma, cuts included.
struct RadialProfile {
    TreeParams params;
    cplx gamma{};
    std::vector<cplx> values;
};
RadialProfile recurrence_eval(const TreeParams& t, cplx gamma, int n_max);

enum class SphericalKind : unsigned char {
    generic,          // B != ±1, gamma != 0: two pure geometric modes
    degenerate_plus,  // B = +1 (gamma = ±b): linear-in-n correction
    degenerate_minus, // B = -1 (gamma = ±a, inhomogeneous only)
    zero,             // gamma = 0: odd spheres vanish identically
};

// Mode decomposition phi_n = kappa_e (B/qm)^m + kappat_e (Bt/qm)^m (n = 2m) and
// phi_n = [kappa_o (B/qm)^m + kappat_o (Bt/qm)^m] (n = 2m + 1), with
// kappa = q_r (B - 1/qm)(B + sqrt(q_a/q_r)) / ((q_r + 1)(B^2 - 1)), the odd
// coefficients carrying an extra F factor, and the tilde versions built from Bt.
struct SphericalCoefficients {
    SphericalKind kind = SphericalKind::generic;
    cplx B{}, Bt{};
    cplx kappa_even{}, kappa_odd{}, kappat_even{}, kappat_odd{};
};

// Throws std::domain_error strictly inside the cuts.
SphericalCoefficients coefficients(const TreeParams& t, cplx gamma);

// Closed-form phi_n. Uses the mode decomposition away from the degenerate set,
// the linear-in-n formulas exactly at gamma in {±a, ±b}, the alternating
// q_a^(-n/2) profile at gamma = 0, and falls back to the recurrence inside the
// ill-conditioned window |B -+ 1| < 1e-5. Throws strictly inside the cuts.
cplx closed_form(const TreeParams& t, cplx gamma, int n);

// phi_n as the boundary integral of the generalized kernel: sum over join
// depths k of K(v_n class, 2k - n | gamma) * nu[k]. Independent route from both
// the recurrence and the mode decomposition. Throws inside the cuts and at
// gamma = 0 (odd-class kernels degenerate there).
cplx arc_sum_eval(const TreeParams& t, cplx gamma, int n);

// Eigenvalue map gamma(z)^2 = (q+^z + q-^(1-z))(q-^z + q+^(1-z)) / D.
// Invariant under z -> 1 - z and z -> z + pi i / ln qm.
cplx gamma_squared_of_z(const TreeParams& t, cplx z);

// One representative of the inverse: z = 1/2 * log_qm((Nh - (q+ + q-) + R) / 2),
// normalized to Re z >= 1/2 and Im z in (-pi/(2 ln qm), pi/(2 ln qm)]. The full
// preimage set is {z + 2 pi i k / ln qm} U {1 - z + 2 pi i k / ln qm}.
cplx z_of_gamma(const TreeParams& t, cplx gamma);

} // namespace semitree

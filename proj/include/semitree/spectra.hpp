#pragma once

#include <vector>

#include "semitree/spherical.hpp"
#include "semitree/types.hpp"

namespace semitree {

// A (possibly degenerate) ellipse region with real center and axis-parallel
// semi-axes; the foci are real and independent of p for the families used here.
struct EllipseRegion {
    double center = 0;
    double semi_real = 0; // along the real axis
    double semi_imag = 0; // along the imaginary axis
    double focus_low = 0, focus_high = 0;

    // |z - f1| + |z - f2| compared with 2 * semi_real classifies z.
    double functional(cplx z) const;
};

// Gamma±(z) = (qm^(2z) + qm^(2(1-z)) + q_other - 1) / ((q_side + 1) q_other),
// the eigenvalue curve of the distance-2 operator mu2 on the `side` class.
cplx Gamma_of_z(const TreeParams& t, cplx z, Parity side);

// Spectrum of mu2 acting on lp of the `side` class: the filled ellipse swept by
// Gamma_side(1/p + i theta). For p < 2 the conjugate exponent is used.
EllipseRegion mu2_region(const TreeParams& t, double p, Parity side);

// Spectrum Sigma_p of mu1^2 (equivalently, the filled ellipse of gamma^2 values):
// center (q+ + q-)/D, semi-axes (qm^(2/p) ± qm^(2/p'))/D, foci exactly (a^2, b^2).
// Affine image (q_a E_p + 1)/(q_a + 1) of the mu2 region on the root class.
EllipseRegion sigma_p(const TreeParams& t, double p);

enum class Verdict : unsigned char { inside, boundary, outside };

// Status of the isolated point gamma = 0 for the queried p.
enum class ZeroStatus : unsigned char {
    in_spectrum,
    not_in_spectrum,
    undetermined, // q+ > q- (root class dominant), p != 2: source gives no answer
    not_isolated, // homogeneous tree: 0 lies in the continuous part
};

struct SpectrumQuery {
    double p = 2;
    cplx gamma{};
    Verdict verdict = Verdict::outside;
    ZeroStatus zero_status = ZeroStatus::not_isolated;
    // Distance functional minus threshold, < 0 inside (0 when the special-cased
    // gamma = 0 rules decided instead).
    double margin = 0;
};

// Membership of gamma in the lp spectrum S_p of mu1. S_p is the preimage of
// Sigma_p under squaring, plus the isolated eigenvalue 0: queries at gamma = 0
// report inside for p = 2 always, inside for p != 2 exactly when the root-class
// degree is the smaller one, and an undetermined status otherwise.
SpectrumQuery membership(const TreeParams& t, double p, cplx gamma);

// One boundary sample: gamma^2 on the ellipse and the two gamma sheets.
struct BoundaryPoint {
    double theta = 0;
    cplx gamma_sq{};
    cplx gamma_sheet1{}, gamma_sheet2{};
};

// The curve b(theta) = center + alpha cos(theta) + i beta sin(theta) sampled at
// `samples` equispaced angles in [0, 2 pi), with both square-root sheets.
std::vector<BoundaryPoint> boundary_curve(const TreeParams& t, double p, int samples);

// rho_p = sqrt((q+ + q- + qm^(2/p) + qm^(2/p')) / D); equals 1 at p = 1 and
// p = inf, and the cut endpoint b at p = 2.
double spectral_radius(const TreeParams& t, double p);

// Summability threshold of the gamma = 0 spherical function:
// p_crit = 1 + ln(q_r)/ln(q_a) (root-class degree over the other).
double p_crit(const TreeParams& t);

// Exponent at which S_p changes connectivity: ln(q+ q-)/ln(max(q+, q-)).
// 0 is in S_p (the two lobes meet) iff p <= split or p >= its conjugate.
double split_exponent(const TreeParams& t);

// lp classification of phi(., v0 | gamma): member of lp exactly for
// p > p_threshold (never attained at the threshold).
struct LpRange {
    SphericalKind kind = SphericalKind::generic;
    double p_threshold = 0; // infinity when no finite p works
    bool bounded = false;   // phi in l-infinity
    bool empty = false;     // no finite p
};
LpRange lp_range_of_spherical(const TreeParams& t, cplx gamma);

} // namespace semitree

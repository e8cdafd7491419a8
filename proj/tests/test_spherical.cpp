#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "semitree/branch.hpp"
#include "semitree/spherical.hpp"

using namespace semitree;

namespace {
const TreeParams t52(5, 2);

double rel(cplx got, cplx want) { return std::abs(got - want) / (1.0 + std::abs(want)); }
} // namespace

TEST_CASE("recurrence seeds and low-order polynomial values") {
    const cplx g(0.3, 0);
    const auto prof = recurrence_eval(t52, g, 4);
    REQUIRE(prof.values.size() == 5);
    CHECK(prof.values[0] == cplx(1, 0));
    CHECK(prof.values[1] == g);
    // phi_2 = ((q_a + 1) gamma phi_1 - 1) / q_a on the first odd level.
    CHECK(rel(prof.values[2], (3.0 * g * g - 1.0) / 2.0) < 1e-15);
    CHECK(rel(prof.values[3], (6.0 * g * ((3.0 * g * g - 1.0) / 2.0) - g) / 5.0) < 1e-15);
}

TEST_CASE("the three evaluators agree off the degenerate set") {
    for (const TreeParams& t : {TreeParams(5, 2), TreeParams(2, 7), TreeParams(3, 3)}) {
        for (cplx g : {cplx(1.4, 0), cplx(0.3, 0.8), cplx(-0.9, -0.2), cplx(0.05, 0.01)}) {
            const auto prof = recurrence_eval(t, g, 18);
            for (int n = 0; n <= 18; ++n) {
                const cplx ref = prof.values[size_t(n)];
                CHECK(rel(closed_form(t, g, n), ref) < 1e-10);
                CHECK(rel(arc_sum_eval(t, g, n), ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("gamma = 0 profile alternates on even spheres and kills odd ones") {
    const auto prof = recurrence_eval(t52, cplx(0, 0), 12);
    for (int n = 0; n <= 12; ++n) {
        const cplx v = closed_form(t52, cplx(0, 0), n);
        CHECK(rel(v, prof.values[size_t(n)]) < 1e-15);
        if (n % 2 == 1) {
            CHECK(v == cplx(0, 0));
        } else {
            const double expect = (n / 2 % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0, -n / 2);
            CHECK(rel(v, cplx(expect, 0)) < 1e-14);
        }
    }
    CHECK(coefficients(t52, cplx(0, 0)).kind == SphericalKind::zero);
}

TEST_CASE("degenerate endpoints match the recurrence exactly") {
    const auto [a, b] = endpoints(t52);
    for (double x : {b, -b, a, -a}) {
        const auto prof = recurrence_eval(t52, cplx(x, 0), 30);
        const auto sc = coefficients(t52, cplx(x, 0));
        CHECK((sc.kind == SphericalKind::degenerate_plus ||
               sc.kind == SphericalKind::degenerate_minus));
        for (int n = 0; n <= 30; ++n)
            CHECK(rel(closed_form(t52, cplx(x, 0), n), prof.values[size_t(n)]) < 1e-11);
    }

    // Homogeneous trees only degenerate at ±b; the origin is the zero kind.
    const TreeParams h(2, 2);
    const auto [ah, bh] = endpoints(h);
    CHECK(coefficients(h, cplx(bh, 0)).kind == SphericalKind::degenerate_plus);
    CHECK(coefficients(h, cplx(0, 0)).kind == SphericalKind::zero);
    const auto prof = recurrence_eval(h, cplx(-bh, 0), 25);
    for (int n = 0; n <= 25; ++n)
        CHECK(rel(closed_form(h, cplx(-bh, 0), n), prof.values[size_t(n)]) < 1e-11);
}

TEST_CASE("near-degenerate window falls back without blowing up") {
    const auto [a, b] = endpoints(t52);
    (void)a;
    const cplx g(b + 1e-7, 0);
    const auto prof = recurrence_eval(t52, g, 25);
    // The mode amplitudes scale like 1/(B - 1) here, so the closed form pays a
    // few digits to cancellation; 1e-9 leaves margin over the observed 5e-11.
    for (int n = 0; n <= 25; ++n) CHECK(rel(closed_form(t52, g, n), prof.values[size_t(n)]) < 1e-9);
    // And the window edge itself stays close to the endpoint values.
    CHECK(rel(closed_form(t52, g, 20), closed_form(t52, cplx(b, 0), 20)) < 1e-4);
}

TEST_CASE("inside the cuts only the recurrence evaluator is defined") {
    const cplx g(0.5, 0);
    CHECK_NOTHROW(recurrence_eval(t52, g, 10));
    CHECK_THROWS_AS(coefficients(t52, g), std::domain_error);
    CHECK_THROWS_AS(closed_form(t52, g, 5), std::domain_error);
    CHECK_THROWS_AS(arc_sum_eval(t52, g, 5), std::domain_error);
    CHECK_THROWS_AS(arc_sum_eval(t52, cplx(0, 0), 4), std::domain_error);
}

TEST_CASE("mode coefficients: even pair sums to 1, odd pair to gamma") {
    for (cplx g : {cplx(1.2, 0.1), cplx(0.4, -0.9)}) {
        const auto sc = coefficients(t52, g);
        CHECK(std::abs(sc.kappa_even + sc.kappat_even - 1.0) < 1e-12);
        CHECK(std::abs(sc.kappa_odd + sc.kappat_odd - g) < 1e-12);
        // Second even value pins the mode split: phi_2 = kappa B/qm + kappat Bt/qm.
        const cplx qq(std::sqrt(10.0), 0);
        const cplx phi2 = (3.0 * g * g - 1.0) / 2.0;
        CHECK(std::abs(sc.kappa_even * sc.B / qq + sc.kappat_even * sc.Bt / qq - phi2) < 1e-12);
    }
}

TEST_CASE("eigenvalue map: landmarks, normalization, round trip") {
    const auto [a, b] = endpoints(t52);
    const double lq = std::log(std::sqrt(10.0));
    CHECK(std::abs(gamma_squared_of_z(t52, cplx(0.5, 0)) - cplx(b * b, 0)) < 1e-14);
    CHECK(std::abs(gamma_squared_of_z(t52, cplx(0, 0)) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(gamma_squared_of_z(t52, cplx(1, 0)) - cplx(1, 0)) < 1e-14);
    const double half_period = 3.14159265358979323846 / (2.0 * lq);
    CHECK(std::abs(gamma_squared_of_z(t52, cplx(0.5, half_period)) - cplx(a * a, 0)) < 1e-14);

    // z(0) lands on the branch with the larger degree.
    const cplx z0 = z_of_gamma(t52, cplx(0, 0));
    CHECK(std::abs(z0 - cplx(std::log(5.0) / (2.0 * lq), half_period)) < 1e-14);

    for (cplx g : {cplx(1.5, 0), cplx(0.9, 0.4), cplx(-0.2, -0.7), cplx(0.12, 0)}) {
        const cplx z = z_of_gamma(t52, g);
        CHECK(z.real() >= 0.5);
        CHECK(z.imag() > -half_period - 1e-15);
        CHECK(z.imag() <= half_period + 1e-15);
        CHECK(std::abs(gamma_squared_of_z(t52, z) - g * g) < 1e-12 * (1.0 + std::abs(g * g)));
        // The mirror representative maps to the same square.
        CHECK(std::abs(gamma_squared_of_z(t52, 1.0 - z) - g * g) <
              1e-12 * (1.0 + std::abs(g * g)));
        // And shifting by the imaginary period changes nothing.
        CHECK(std::abs(gamma_squared_of_z(t52, z + cplx(0, 2.0 * half_period)) - g * g) <
              1e-11 * (1.0 + std::abs(g * g)));
    }
}

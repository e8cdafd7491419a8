#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace semitree {

using cplx = std::complex<double>;

// Parity class of a vertex. Plus is the class of homogeneity degree q_plus.
// The same enum doubles as the sign index of the hitting continuations F^+ / F^-
// (the sign names the class of the walk's starting vertex).
enum class Parity { plus, minus };

constexpr Parity opposite(Parity s) {
    return s == Parity::plus ? Parity::minus : Parity::plus;
}

constexpr const char* parity_name(Parity s) {
    return s == Parity::plus ? "+" : "-";
}

// Raised when a requested truncation or series length would exceed the
// configured size budget. The CLI maps this to its own exit code.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degree parameters of the semi-homogeneous tree T(q+, q-): every vertex of the
// plus class has q_plus + 1 neighbors, every vertex of the minus class q_minus + 1.
// The root v0 lives in the class named by root_parity.
struct TreeParams {
    int q_plus;
    int q_minus;
    Parity root_parity;

    TreeParams(int qp, int qm, Parity root = Parity::plus)
        : q_plus(qp), q_minus(qm), root_parity(root) {
        if (qp < 2 || qm < 2)
            throw std::invalid_argument("TreeParams: homogeneity degrees must be >= 2, got q+ = " +
                                        std::to_string(qp) + ", q- = " + std::to_string(qm));
    }

    int q(Parity s) const { return s == Parity::plus ? q_plus : q_minus; }

    // Class (and degree) of a vertex at distance n from the root.
    Parity parity_at_depth(long long n) const {
        return (n % 2 == 0) ? root_parity : opposite(root_parity);
    }
    int q_at_depth(long long n) const { return q(parity_at_depth(n)); }
    int q_root() const { return q(root_parity); }
    int q_alt() const { return q(opposite(root_parity)); }

    bool homogeneous() const { return q_plus == q_minus; }

    // Geometric mean of the two degrees, the natural base of all growth rates here.
    double qm() const { return std::sqrt(double(q_plus) * double(q_minus)); }
    long long q_product() const { return (long long)q_plus * (long long)q_minus; }
    // D = (q+ + 1)(q- + 1), the common denominator of the spectrum geometry.
    long long D() const { return (long long)(q_plus + 1) * (long long)(q_minus + 1); }

    // Same tree re-rooted notionally so that the root class is plus. Radial
    // quantities (spherical functions, arc partitions) are computed against this.
    TreeParams canonical() const {
        if (root_parity == Parity::plus) return *this;
        return TreeParams(q_minus, q_plus, Parity::plus);
    }

    bool operator==(const TreeParams&) const = default;
};

} // namespace semitree

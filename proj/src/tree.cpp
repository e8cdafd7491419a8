#include "semitree/tree.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace semitree {

BigInt sphere_cardinality(const TreeParams& t, Parity center, int n) {
    if (n < 0) throw std::invalid_argument("sphere_cardinality: n must be >= 0");
    if (n == 0) return 1;
    const BigInt q = t.q(center);
    const BigInt qt = t.q(opposite(center));
    const BigInt qq = q * qt; // qm^2
    if (n % 2 == 1) return (q + 1) * ipow(qq, unsigned((n - 1) / 2));
    return (q + 1) * ipow(qq, unsigned((n - 2) / 2)) * qt;
}

BigInt sphere_cardinality(const TreeParams& t, int n) {
    return sphere_cardinality(t, t.root_parity, n);
}

int horospherical_index(int k, int n) {
    if (k < 0 || k > n)
        throw std::invalid_argument("horospherical_index: need 0 <= k <= n, got k = " +
                                    std::to_string(k) + ", n = " + std::to_string(n));
    return 2 * k - n;
}

Rational arc_measure(const TreeParams& t, int n) {
    if (n < 0) throw std::invalid_argument("arc_measure: n must be >= 0");
    if (n == 0) return Rational(1);
    const BigInt qr = t.q_root();
    const BigInt qa = t.q_alt();
    // Terminal entry of the partition table; coincides with 1/|S(v0, n)|.
    if (n % 2 == 0) return Rational(qr, qr + 1) * rat_pow(qr * qa, -n / 2);
    return Rational(qa, qr + 1) * rat_pow(qr, (1 - n) / 2) * rat_pow(qa, -(n + 1) / 2);
}

ArcPartition arc_partition(const TreeParams& t, int n) {
    if (n < 0) throw std::invalid_argument("arc_partition: n must be >= 0");
    const BigInt qr = t.q_root();
    const BigInt qa = t.q_alt();
    ArcPartition part;
    part.n = n;
    part.nu.resize(size_t(n) + 1);
    for (int k = 0; k <= n; ++k) {
        Rational m;
        if (k == 0) {
            m = (n == 0) ? Rational(1) : Rational(qr, qr + 1);
        } else if (k == n) {
            m = arc_measure(t, n);
        } else if (k % 2 == 0) {
            m = Rational(qr - 1, qr + 1) * rat_pow(qr * qa, -k / 2);
        } else {
            m = Rational(qa - 1, qr + 1) * rat_pow(qr, (1 - k) / 2) * rat_pow(qa, -(k + 1) / 2);
        }
        part.nu[size_t(k)] = m;
    }
    return part;
}

int TruncatedTree::depth_of(std::int64_t v) const {
    auto it = std::upper_bound(offset_.begin(), offset_.end(), v);
    return int(it - offset_.begin()) - 1;
}

std::int64_t TruncatedTree::branching(int d) const {
    if (d == 0) return params_.q_root() + 1;
    return params_.q_at_depth(d);
}

std::int64_t TruncatedTree::parent(std::int64_t v) const {
    const int d = depth_of(v);
    const std::int64_t i = v - offset_[d];
    return offset_[d - 1] + i / branching(d - 1);
}

TruncatedTree::ChildRange TruncatedTree::children(std::int64_t v, int d) const {
    if (d >= depth_) return {0, 0};
    const std::int64_t c = branching(d);
    const std::int64_t i = v - offset_[d];
    const std::int64_t b = offset_[d + 1] + i * c;
    return {b, b + c};
}

TruncatedTree::ChildRange TruncatedTree::children(std::int64_t v) const {
    return children(v, depth_of(v));
}

BigInt truncated_tree_size(const TreeParams& t, int depth) {
    BigInt total = 0;
    for (int n = 0; n <= depth; ++n) total += sphere_cardinality(t, n);
    return total;
}

TruncatedTree build_truncated_tree(const TreeParams& t, int depth, std::int64_t max_vertices) {
    if (depth < 0) throw std::invalid_argument("build_truncated_tree: depth must be >= 0");
    const BigInt total = truncated_tree_size(t, depth);
    if (total > max_vertices)
        throw CapacityError("build_truncated_tree: depth " + std::to_string(depth) +
                            " truncation has " + total.str() + " vertices, budget is " +
                            std::to_string(max_vertices));
    std::vector<std::int64_t> offset(size_t(depth) + 2);
    offset[0] = 0;
    BigInt run = 0;
    for (int n = 0; n <= depth; ++n) {
        run += sphere_cardinality(t, n);
        offset[size_t(n) + 1] = run.convert_to<std::int64_t>();
    }
    return TruncatedTree(t, depth, std::move(offset));
}

MaskedField apply_mu1(const TruncatedTree& tree, std::span<const cplx> f) {
    if (std::int64_t(f.size()) != tree.size())
        throw std::invalid_argument("apply_mu1: field size does not match the tree");
    MaskedField out;
    out.interior_depth = tree.depth(); // depths 0..N-1 have a full stencil
    out.values.assign(f.size(), cplx(0, 0));
    for (int d = 0; d < tree.depth(); ++d) {
        const std::int64_t child_count = tree.branching(d);
        const double inv_deg = 1.0 / double(d == 0 ? child_count : child_count + 1);
        for (std::int64_t v = tree.level_begin(d); v < tree.level_end(d); ++v) {
            cplx sum = (d == 0) ? cplx(0, 0) : f[size_t(tree.parent(v))];
            const auto ch = tree.children(v, d);
            for (std::int64_t c = ch.begin; c < ch.end; ++c) sum += f[size_t(c)];
            out.values[size_t(v)] = sum * inv_deg;
        }
    }
    return out;
}

MaskedField apply_mu2(const TruncatedTree& tree, std::span<const cplx> f) {
    if (std::int64_t(f.size()) != tree.size())
        throw std::invalid_argument("apply_mu2: field size does not match the tree");
    MaskedField out;
    out.interior_depth = std::max(0, tree.depth() - 1); // depths 0..N-2
    out.values.assign(f.size(), cplx(0, 0));
    for (int d = 0; d + 2 <= tree.depth(); ++d) {
        for (std::int64_t v = tree.level_begin(d); v < tree.level_end(d); ++v) {
            cplx sum(0, 0);
            std::int64_t count = 0;
            if (d >= 1) {
                const std::int64_t p = tree.parent(v);
                if (d >= 2) {
                    sum += f[size_t(tree.parent(p))];
                    ++count;
                }
                const auto sib = tree.children(p, d - 1);
                for (std::int64_t s = sib.begin; s < sib.end; ++s) {
                    if (s == v) continue;
                    sum += f[size_t(s)];
                    ++count;
                }
            }
            const auto ch = tree.children(v, d);
            for (std::int64_t c = ch.begin; c < ch.end; ++c) {
                const auto gc = tree.children(c, d + 1);
                for (std::int64_t g = gc.begin; g < gc.end; ++g) {
                    sum += f[size_t(g)];
                    ++count;
                }
            }
            // count is (q_v + 1) * q~_v, the distance-2 sphere size.
            out.values[size_t(v)] = sum / double(count);
        }
    }
    return out;
}

} // namespace semitree

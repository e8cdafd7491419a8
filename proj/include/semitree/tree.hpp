#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semitree/rational.hpp"
#include "semitree/types.hpp"

namespace semitree {

// |S(v0, n)|, the number of vertices at distance n from a vertex of class
// `center`. Exact: 1, (q+1)*qm^(n-1) for odd n, (q+1)*qm^(n-2)*q~ for even n > 0,
// where q is the degree at the center, q~ the other one, and qm^2 = q+ * q-.
BigInt sphere_cardinality(const TreeParams& t, Parity center, int n);

// Sphere around the root.
BigInt sphere_cardinality(const TreeParams& t, int n);

// h(v, v0, omega) = 2k - n for omega in the arc Omega_k(v0, v_n): the distance
// v_n -> omega minus the distance v0 -> omega stabilizes to n - 2k, and h is its
// negative (join at depth k on the geodesic [v0, v_n]).
int horospherical_index(int k, int n);

// nu_{v0}(Omega_n(v0, v_n)) for v_n at distance n: the mass the root assigns to
// the boundary arc of a single vertex at depth n. Equals 1/sphere_cardinality(n).
Rational arc_measure(const TreeParams& t, int n);

// The full partition of the boundary by join depth along a geodesic [v0, v_n]:
// nu[k] is the mass of Omega_k(v0, v_n), k = 0..n. The masses sum to one exactly.
struct ArcPartition {
    int n = 0;
    std::vector<Rational> nu;
};
ArcPartition arc_partition(const TreeParams& t, int n);

// Rooted truncation of T(q+, q-) to depth N, vertices indexed in BFS order with
// contiguous child ranges. Because every vertex of a given depth has the same
// number of children, parents and child ranges are arithmetic in the index and
// only the level offsets are stored.
class TruncatedTree {
  public:
    struct ChildRange {
        std::int64_t begin = 0, end = 0;
        std::int64_t count() const { return end - begin; }
    };

    TruncatedTree(const TreeParams& t, int depth, std::vector<std::int64_t> level_offset)
        : params_(t), depth_(depth), offset_(std::move(level_offset)) {}

    const TreeParams& params() const { return params_; }
    int depth() const { return depth_; }
    std::int64_t size() const { return offset_.back(); }

    std::int64_t level_begin(int d) const { return offset_[d]; }
    std::int64_t level_end(int d) const { return offset_[d + 1]; }

    int depth_of(std::int64_t v) const;
    Parity parity_of(std::int64_t v) const { return params_.parity_at_depth(depth_of(v)); }
    int q_of(std::int64_t v) const { return params_.q_at_depth(depth_of(v)); }

    // Children a vertex at depth d would have in the full tree (root: q+1, else q).
    std::int64_t branching(int d) const;

    std::int64_t parent(std::int64_t v) const;                 // v > 0
    ChildRange children(std::int64_t v) const;                 // empty at the frontier
    ChildRange children(std::int64_t v, int depth_hint) const; // depth known by caller

  private:
    TreeParams params_;
    int depth_;
    std::vector<std::int64_t> offset_; // size depth + 2, offset_[0] = 0
};

// Exact vertex count of the depth-N truncation.
BigInt truncated_tree_size(const TreeParams& t, int depth);

inline constexpr std::int64_t default_vertex_budget = 200'000'000;

// Throws CapacityError when the truncation would exceed max_vertices.
TruncatedTree build_truncated_tree(const TreeParams& t, int depth,
                                   std::int64_t max_vertices = default_vertex_budget);

// Result of a neighborhood-averaging sweep. values[v] is meaningful only for
// vertices with depth_of(v) < interior_depth; nearer the frontier the stencil
// is incomplete and the entry is left at zero.
struct MaskedField {
    std::vector<cplx> values;
    int interior_depth = 0;
};

// mu1: average of f over the unit sphere around each vertex.
MaskedField apply_mu1(const TruncatedTree& tree, std::span<const cplx> f);

// mu2: average of f over the distance-2 sphere around each vertex.
MaskedField apply_mu2(const TruncatedTree& tree, std::span<const cplx> f);

} // namespace semitree

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "treeharm/errors.hpp"

namespace treeharm {

/// Vertices are labelled breadth-first from the root: label 0 is the root,
/// labels 1..q+1 its children, and each later vertex k has children
/// q*k+2 .. q*k+q+1 on the next level.
using VertexId = std::uint64_t;

/// Homogeneous tree in which every vertex has q+1 neighbours, so the root
/// has q+1 children and every other vertex has q.
struct TreeParams {
    unsigned q;

    explicit TreeParams(unsigned branching) : q(branching) {
        if (q < 2) throw validation_error("branching factor must be at least 2");
    }
};

/// Largest label on level m, equivalently one less than the number of
/// vertices within distance m of the root.
VertexId cumulative_count(const TreeParams& tp, unsigned m);

/// Distance from the root.
unsigned depth(const TreeParams& tp, VertexId k);

/// Throws "origin has no predecessor" for k = 0.
VertexId parent(const TreeParams& tp, VertexId k);

/// Children in label order: q+1 of them for the root, q otherwise.
std::vector<VertexId> children(const TreeParams& tp, VertexId k);

/// Ancestor `steps` levels up; throws "power exceeds depth" if steps > |k|.
VertexId iterated_parent(const TreeParams& tp, VertexId k, unsigned steps);

/// Deepest common ancestor.
VertexId confluent(const TreeParams& tp, VertexId a, VertexId b);

/// True when a lies on the root path of x (a = x included).
bool is_ancestor_or_self(const TreeParams& tp, VertexId a, VertexId x);

/// Inclusive label range [first, last] of level m.
std::pair<VertexId, VertexId> level_range(const TreeParams& tp, unsigned m);

/// 0 on the diagonal, otherwise e^{-|confluent|}; an ultrametric with
/// values in {0} ∪ {e^{-n} : n ≥ 0}.
double gromov_distance(const TreeParams& tp, VertexId a, VertexId b);

enum class SetKind { whole, sector, singleton };

/// One member of the nested set family: the whole space, the full subtree
/// below a vertex (a sector), or a single vertex.
struct DyadicSet {
    SetKind kind = SetKind::whole;
    VertexId vertex = 0; // sector root or the singleton's point; 0 for whole

    static DyadicSet whole_space() { return {SetKind::whole, 0}; }
    static DyadicSet sector(VertexId v) { return {SetKind::sector, v}; }
    static DyadicSet singleton(VertexId v) { return {SetKind::singleton, v}; }

    friend bool operator==(const DyadicSet&, const DyadicSet&) = default;
};

/// Order by (kind, vertex); gives maps and sorted listings a stable key.
bool operator<(const DyadicSet& a, const DyadicSet& b);

/// Metric ball with its resolved shape. Every ball collapses to a
/// singleton, a sector rooted at an ancestor of the center, or the whole
/// space, so the ball is stored by value alongside center and radius.
struct GromovBall {
    VertexId center = 0;
    double radius = 0.0;
    DyadicSet resolved;
};

/// Resolves B(x, r) by the radius case split:
///   singleton      for 0 < r <= e^{-|x|},
///   sector of the ancestor at depth -floor(log r)
///                  for e^{-|x|} < r <= 1 (depth 0 meaning the whole space),
///   whole space    for r > 1.
/// log r within 1e-12 of an integer is treated as exactly that integer, so
/// radii intended as e^{-n} land on the closed side of each boundary.
GromovBall gromov_ball(const TreeParams& tp, VertexId x, double r);

/// The |x|+2 distinct balls centered at x, smallest to largest, each with a
/// representative radius that gromov_ball resolves back to the same set.
std::vector<GromovBall> distinct_balls(const TreeParams& tp, VertexId x);

} // namespace treeharm

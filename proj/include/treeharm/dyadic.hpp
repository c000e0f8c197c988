#pragma once

#include <vector>

#include "treeharm/measure.hpp"
#include "treeharm/tree.hpp"

namespace treeharm {

/// The nested family is layered by scale: layer 0 is the whole space;
/// layer m >= 1 partitions the space into the singletons of depth < m and
/// the sectors rooted at depth m. Each layer refines the previous one.

/// True when d lies in layer m.
bool in_family_at_scale(const TreeParams& tp, const DyadicSet& d, unsigned m);

/// The scale at which d first appears: 0 for the whole space, |v| for a
/// sector (its only scale), |v| + 1 for a singleton (member of every layer
/// from there on).
unsigned first_scale(const TreeParams& tp, const DyadicSet& d);

/// Layer m in label order, singletons before sectors. Its size is one more
/// than the largest label on level m.
std::vector<DyadicSet> partition_at_scale(const TreeParams& tp, unsigned m);

/// The layer-(m+1) pieces of a layer-m set: a sector splits into its root
/// vertex and its child sectors, the whole space into the root vertex and
/// the depth-1 sectors, and a singleton passes through unchanged.
std::vector<DyadicSet> refine(const TreeParams& tp, const DyadicSet& d);

/// The unique layer-(m-1) set containing d from layer m. Throws "scale
/// mismatch" when d is not in layer m, and a precondition error at m = 0.
DyadicSet dyadic_parent(const TreeParams& tp, const DyadicSet& d, unsigned m);

/// All family members containing x, smallest to largest: the singleton,
/// the sectors rooted along the root path of x, then the whole space.
/// Exactly |x| + 2 sets, the same list a radius sweep of balls at x visits.
std::vector<DyadicSet> containing_sets(const TreeParams& tp, VertexId x);

/// a contains b (as vertex sets).
bool dyadic_contains(const TreeParams& tp, const DyadicSet& a, const DyadicSet& b);

/// Two family members are always nested or disjoint.
bool dyadic_disjoint(const TreeParams& tp, const DyadicSet& a, const DyadicSet& b);

struct MeasureRatioReport {
    bool pass = true;
    double constant = 0.0;
    double worst_ratio = 0.0;
    DyadicSet worst_child;
    unsigned worst_scale = 0;
};

/// For every layer m <= max_scale and every D in it, checks
/// mass(D) <= mass(parent) <= constant * mass(D) against the doubling
/// constant, reporting the worst parent/child ratio and its witness.
MeasureRatioReport measure_ratio_check(const MeasureParams& mp, unsigned max_scale);

} // namespace treeharm

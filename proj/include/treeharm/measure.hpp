#pragma once

#include <cstdint>
#include <vector>

#include "treeharm/tree.hpp"

namespace treeharm {

/// Radial measure assigning q^{-alpha |x|} to the vertex x. The exponent
/// must exceed 1 so that sector masses converge.
struct MeasureParams {
    TreeParams tree;
    double alpha;

    MeasureParams(TreeParams tp, double a) : tree(tp), alpha(a) {
        if (!(alpha > 1.0)) throw validation_error("alpha must exceed 1");
    }
};

/// q^{-alpha |x|}.
double point_mass(const MeasureParams& mp, VertexId x);

/// Mass of the full subtree below v, q^{-alpha |v|} / (1 - q^{1-alpha}).
/// The subtree below the root is the whole space, whose mass follows the
/// different closed form of total_mass; that value is returned for v = 0.
double sector_mass(const MeasureParams& mp, VertexId v);

/// (1 + q^{-alpha}) / (1 - q^{1-alpha}).
double total_mass(const MeasureParams& mp);

/// max{q^alpha + 1, (1 - q^{1-alpha})^{-1}}.
double doubling_constant(const MeasureParams& mp);

/// Mass of a whole/sector/singleton set.
double set_mass(const MeasureParams& mp, const DyadicSet& d);

/// Disjoint union of sectors and single vertices, held canonically: no
/// singleton inside a listed sector, no sector root strictly inside
/// another listed sector, both lists sorted and duplicate-free. A sector
/// root 0 denotes the whole space and then stands alone.
///
/// A vertex plus all of its child sectors is deliberately not merged into
/// the parent sector; merged() performs that normalization explicitly.
struct Region {
    std::vector<VertexId> sectors;
    std::vector<VertexId> singletons;

    /// Absorbs covered parts and sorts; accepts any raw listing.
    static Region canonical(const TreeParams& tp, std::vector<VertexId> sectors,
                            std::vector<VertexId> singletons);

    /// Validates an already-canonical listing; throws "region not canonical".
    static Region checked(const TreeParams& tp, std::vector<VertexId> sectors,
                          std::vector<VertexId> singletons);

    static Region empty() { return {}; }
    static Region whole() { return {{0}, {}}; }
    static Region of(const DyadicSet& d);

    bool is_empty() const { return sectors.empty() && singletons.empty(); }

    friend bool operator==(const Region&, const Region&) = default;
};

bool region_contains(const TreeParams& tp, const Region& r, VertexId x);
Region region_union(const TreeParams& tp, const Region& a, const Region& b);
Region region_intersect(const TreeParams& tp, const Region& a, const Region& b);
Region region_complement(const TreeParams& tp, const Region& r);

/// Exhaustively merges every vertex-plus-all-child-sectors family into its
/// parent sector. Two regions describe the same vertex set exactly when
/// their merged forms are equal.
Region region_merged(const TreeParams& tp, const Region& r);

double region_mass(const MeasureParams& mp, const Region& r);

struct DoublingReport {
    bool pass = true;
    double constant = 0.0;     // bound the ratios are compared against
    double worst_ratio = 0.0;
    VertexId worst_vertex = 0;
    double worst_radius = 0.0;
    std::uint64_t checked = 0; // number of (vertex, radius) pairs examined
};

/// Checks mass(B(x, 2r)) <= constant * mass(B(x, r)) for every vertex with
/// |x| <= max_depth and every radius in the grid, and reports the worst
/// observed ratio with its witness.
DoublingReport verify_doubling(const MeasureParams& mp, unsigned max_depth,
                               const std::vector<double>& radii);

/// Radius grid for verify_doubling: every case boundary e^{-n} for
/// n = 0..max_depth together with off-boundary companions e^{-n}(1 ± 1e-6),
/// a few radii beyond 1, and a log-spaced fill up to `count` points.
std::vector<double> doubling_radius_grid(unsigned max_depth, std::size_t count);

/// Radial set function given by head values sigma_0..sigma_N on depths and
/// a geometric tail sigma_{n+1} = tail_ratio * sigma_n beyond the head.
/// Valid against a tree with branching q when the head is positive and
/// nonincreasing and 0 < tail_ratio < 1/q, so subtree sums converge.
struct ReferenceMeasure {
    std::vector<double> radial_values;
    double tail_ratio = 0.0;
};

/// Throws validation_error when rm violates its invariants for this tree.
void validate_reference(const TreeParams& tp, const ReferenceMeasure& rm);

/// Value at a vertex of depth n.
double reference_point(const ReferenceMeasure& rm, unsigned n);

/// Mass of the subtree below a depth-n vertex, n >= 1; geometric tail in
/// closed form.
double reference_sector(const TreeParams& tp, const ReferenceMeasure& rm, unsigned n);

/// Mass of the whole space.
double reference_total(const TreeParams& tp, const ReferenceMeasure& rm);

/// sup over nonroot vertices of subtree mass over vertex value. Radial, so
/// the sup runs over depths; beyond the head it is the constant
/// 1 / (1 - q * tail_ratio).
double optimality_ratio(const TreeParams& tp, const ReferenceMeasure& rm);

/// sup over depths of sigma_n / sigma_{n+1}; beyond the head it is
/// 1 / tail_ratio.
double parent_ratio(const ReferenceMeasure& rm);

struct ReferenceClassification {
    bool optimal = false;        // optimality ratio within the bound
    bool parent_bounded = false; // parent ratio within the bound
    double optimality = 0.0;
    double parent = 0.0;
    double bound = 0.0;
};

/// Classifies by thresholding both ratios against `bound`; ratios are
/// always finite for valid inputs, so the bound exists to flag
/// tail_ratio -> 1/q blowups rather than to prove divergence.
ReferenceClassification classify_reference_measure(const TreeParams& tp,
                                                   const ReferenceMeasure& rm,
                                                   double bound = 1e6);

/// The radial profile of the vertex measure itself: head q^{-alpha n} for
/// n <= head_depth and tail ratio q^{-alpha}.
ReferenceMeasure reference_from_measure(const MeasureParams& mp, unsigned head_depth);

} // namespace treeharm

#include "treeharm/dyadic.hpp"

namespace treeharm {

bool in_family_at_scale(const TreeParams& tp, const DyadicSet& d, unsigned m) {
    switch (d.kind) {
        case SetKind::whole: return m == 0;
        case SetKind::sector: return m >= 1 && depth(tp, d.vertex) == m;
        case SetKind::singleton: return m >= 1 && depth(tp, d.vertex) <= m - 1;
    }
    return false;
}

unsigned first_scale(const TreeParams& tp, const DyadicSet& d) {
    switch (d.kind) {
        case SetKind::whole: return 0;
        case SetKind::sector: return depth(tp, d.vertex);
        case SetKind::singleton: return depth(tp, d.vertex) + 1;
    }
    throw validation_error("unknown set kind");
}

std::vector<DyadicSet> partition_at_scale(const TreeParams& tp, unsigned m) {
    if (m == 0) return {DyadicSet::whole_space()};
    std::vector<DyadicSet> out;
    out.reserve(static_cast<std::size_t>(cumulative_count(tp, m)) + 1);
    for (VertexId v = 0; v <= cumulative_count(tp, m - 1); ++v)
        out.push_back(DyadicSet::singleton(v));
    const auto [first, last] = level_range(tp, m);
    for (VertexId v = first; v <= last; ++v) out.push_back(DyadicSet::sector(v));
    return out;
}

std::vector<DyadicSet> refine(const TreeParams& tp, const DyadicSet& d) {
    if (d.kind == SetKind::singleton) return {d};
    const VertexId root = (d.kind == SetKind::whole) ? 0 : d.vertex;
    std::vector<DyadicSet> out;
    out.push_back(DyadicSet::singleton(root));
    for (VertexId c : children(tp, root)) out.push_back(DyadicSet::sector(c));
    return out;
}

DyadicSet dyadic_parent(const TreeParams& tp, const DyadicSet& d, unsigned m) {
    if (!in_family_at_scale(tp, d, m)) throw precondition_error("scale mismatch");
    if (m == 0) throw precondition_error("whole space has no dyadic parent");
    if (d.kind == SetKind::singleton) {
        // Still merged into its sector one layer up exactly when the layer
        // boundary sits at its own depth. At the root that sector is the
        // whole space.
        if (depth(tp, d.vertex) != m - 1) return d;
        return (d.vertex == 0) ? DyadicSet::whole_space() : DyadicSet::sector(d.vertex);
    }
    return (m == 1) ? DyadicSet::whole_space() : DyadicSet::sector(parent(tp, d.vertex));
}

std::vector<DyadicSet> containing_sets(const TreeParams& tp, VertexId x) {
    std::vector<DyadicSet> out;
    out.push_back(DyadicSet::singleton(x));
    for (VertexId a = x; a != 0; a = parent(tp, a)) out.push_back(DyadicSet::sector(a));
    out.push_back(DyadicSet::whole_space());
    return out;
}

bool dyadic_contains(const TreeParams& tp, const DyadicSet& a, const DyadicSet& b) {
    switch (a.kind) {
        case SetKind::whole: return true;
        case SetKind::sector:
            if (b.kind == SetKind::whole) return false;
            return is_ancestor_or_self(tp, a.vertex, b.vertex);
        case SetKind::singleton:
            return b.kind == SetKind::singleton && a.vertex == b.vertex;
    }
    return false;
}

bool dyadic_disjoint(const TreeParams& tp, const DyadicSet& a, const DyadicSet& b) {
    return !dyadic_contains(tp, a, b) && !dyadic_contains(tp, b, a);
}

MeasureRatioReport measure_ratio_check(const MeasureParams& mp, unsigned max_scale) {
    MeasureRatioReport rep;
    rep.constant = doubling_constant(mp);
    for (unsigned m = 1; m <= max_scale; ++m) {
        for (const DyadicSet& d : partition_at_scale(mp.tree, m)) {
            const DyadicSet p = dyadic_parent(mp.tree, d, m);
            const double ratio = set_mass(mp, p) / set_mass(mp, d);
            if (ratio < 1.0 - 1e-12) rep.pass = false; // monotonicity must hold
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_child = d;
                rep.worst_scale = m;
            }
        }
    }
    if (rep.worst_ratio > rep.constant * (1.0 + 1e-9)) rep.pass = false;
    return rep;
}

} // namespace treeharm

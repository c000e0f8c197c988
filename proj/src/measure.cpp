#include "treeharm/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace treeharm {

namespace {

// Parts of a region, walked uniformly by the boolean operations.
struct Part {
    bool is_sector = false;
    VertexId v = 0;
};

std::vector<Part> parts_of(const Region& r) {
    std::vector<Part> out;
    out.reserve(r.sectors.size() + r.singletons.size());
    for (VertexId v : r.sectors) out.push_back({true, v});
    for (VertexId v : r.singletons) out.push_back({false, v});
    return out;
}

void sort_unique(std::vector<VertexId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

double point_mass(const MeasureParams& mp, VertexId x) {
    return std::pow(static_cast<double>(mp.tree.q),
                    -mp.alpha * static_cast<double>(depth(mp.tree, x)));
}

double sector_mass(const MeasureParams& mp, VertexId v) {
    if (v == 0) return total_mass(mp);
    const double q = static_cast<double>(mp.tree.q);
    return point_mass(mp, v) / (1.0 - std::pow(q, 1.0 - mp.alpha));
}

double total_mass(const MeasureParams& mp) {
    const double q = static_cast<double>(mp.tree.q);
    return (1.0 + std::pow(q, -mp.alpha)) / (1.0 - std::pow(q, 1.0 - mp.alpha));
}

double doubling_constant(const MeasureParams& mp) {
    const double q = static_cast<double>(mp.tree.q);
    return std::max(std::pow(q, mp.alpha) + 1.0, 1.0 / (1.0 - std::pow(q, 1.0 - mp.alpha)));
}

double set_mass(const MeasureParams& mp, const DyadicSet& d) {
    switch (d.kind) {
        case SetKind::whole: return total_mass(mp);
        case SetKind::sector: return sector_mass(mp, d.vertex);
        case SetKind::singleton: return point_mass(mp, d.vertex);
    }
    throw validation_error("unknown set kind");
}

Region Region::canonical(const TreeParams& tp, std::vector<VertexId> sectors,
                         std::vector<VertexId> singletons) {
    sort_unique(sectors);
    sort_unique(singletons);
    if (!sectors.empty() && sectors.front() == 0) return Region::whole();

    // Covering sectors are found by walking root paths against a hash set,
    // which keeps canonicalization linear in part count times depth.
    const std::unordered_set<VertexId> sector_set(sectors.begin(), sectors.end());
    const auto under_sector = [&](VertexId x, bool proper_only) {
        if (!proper_only && sector_set.count(x) != 0) return true;
        for (VertexId a = x; a != 0;) {
            a = parent(tp, a);
            if (sector_set.count(a) != 0) return true;
        }
        return false;
    };
    std::vector<VertexId> kept_sectors;
    for (VertexId v : sectors)
        if (!under_sector(v, true)) kept_sectors.push_back(v);
    std::vector<VertexId> kept_singletons;
    for (VertexId x : singletons)
        if (!under_sector(x, false)) kept_singletons.push_back(x);
    return {std::move(kept_sectors), std::move(kept_singletons)};
}

Region Region::checked(const TreeParams& tp, std::vector<VertexId> sectors,
                       std::vector<VertexId> singletons) {
    const std::size_t ns = sectors.size();
    const std::size_t np = singletons.size();
    Region r = canonical(tp, std::move(sectors), std::move(singletons));
    if (r.sectors.size() != ns || r.singletons.size() != np)
        throw validation_error("region not canonical");
    return r;
}

Region Region::of(const DyadicSet& d) {
    switch (d.kind) {
        case SetKind::whole: return Region::whole();
        case SetKind::sector: return {{d.vertex}, {}};
        case SetKind::singleton: return {{}, {d.vertex}};
    }
    throw validation_error("unknown set kind");
}

bool region_contains(const TreeParams& tp, const Region& r, VertexId x) {
    for (VertexId v : r.singletons)
        if (v == x) return true;
    for (VertexId v : r.sectors)
        if (is_ancestor_or_self(tp, v, x)) return true;
    return false;
}

Region region_union(const TreeParams& tp, const Region& a, const Region& b) {
    std::vector<VertexId> sectors = a.sectors;
    sectors.insert(sectors.end(), b.sectors.begin(), b.sectors.end());
    std::vector<VertexId> singletons = a.singletons;
    singletons.insert(singletons.end(), b.singletons.begin(), b.singletons.end());
    return Region::canonical(tp, std::move(sectors), std::move(singletons));
}

Region region_intersect(const TreeParams& tp, const Region& a, const Region& b) {
    std::vector<VertexId> sectors;
    std::vector<VertexId> singletons;
    for (const Part& pa : parts_of(a)) {
        for (const Part& pb : parts_of(b)) {
            if (pa.is_sector && pb.is_sector) {
                if (is_ancestor_or_self(tp, pa.v, pb.v)) sectors.push_back(pb.v);
                else if (is_ancestor_or_self(tp, pb.v, pa.v)) sectors.push_back(pa.v);
            } else if (pa.is_sector != pb.is_sector) {
                const VertexId sect = pa.is_sector ? pa.v : pb.v;
                const VertexId point = pa.is_sector ? pb.v : pa.v;
                if (is_ancestor_or_self(tp, sect, point)) singletons.push_back(point);
            } else if (pa.v == pb.v) {
                singletons.push_back(pa.v);
            }
        }
    }
    return Region::canonical(tp, std::move(sectors), std::move(singletons));
}

Region region_complement(const TreeParams& tp, const Region& r) {
    if (!r.sectors.empty() && r.sectors.front() == 0) return Region::empty();
    if (r.is_empty()) return Region::whole();

    // Descend from the root along the part vertices. A child subtree that
    // holds no part of the region flips to the complement as one sector; on
    // the visited spine each vertex lands in the complement unless the region
    // lists it as a singleton.
    struct Item {
        VertexId v = 0;
        unsigned d = 0;
        bool is_sector = false;
    };
    std::vector<VertexId> out_sectors;
    std::vector<VertexId> out_singletons;
    const auto descend = [&](auto&& self, VertexId a, unsigned da,
                             std::vector<Item> items) -> void {
        bool listed = false;
        for (const Item& it : items) {
            if (it.v != a) continue;
            if (it.is_sector) return;
            listed = true;
        }
        if (!listed) out_singletons.push_back(a);
        std::unordered_map<VertexId, std::vector<Item>> by_child;
        for (Item& it : items)
            if (it.v != a)
                by_child[iterated_parent(tp, it.v, it.d - da - 1)].push_back(it);
        for (VertexId c : children(tp, a)) {
            auto g = by_child.find(c);
            if (g == by_child.end()) out_sectors.push_back(c);
            else self(self, c, da + 1, std::move(g->second));
        }
    };
    std::vector<Item> items;
    items.reserve(r.sectors.size() + r.singletons.size());
    for (VertexId v : r.sectors) items.push_back({v, depth(tp, v), true});
    for (VertexId v : r.singletons) items.push_back({v, depth(tp, v), false});
    descend(descend, 0, 0, std::move(items));
    sort_unique(out_sectors);
    sort_unique(out_singletons);
    return {std::move(out_sectors), std::move(out_singletons)};
}

Region region_merged(const TreeParams& tp, const Region& r) {
    std::set<VertexId> sectors(r.sectors.begin(), r.sectors.end());
    std::vector<VertexId> singletons = r.singletons;
    // Labels grow with depth, so visiting singletons by decreasing label
    // works bottom up and lets one pass carry merges all the way to the root.
    std::sort(singletons.rbegin(), singletons.rend());
    std::vector<VertexId> kept;
    for (VertexId v : singletons) {
        const auto kids = children(tp, v);
        const bool complete = std::all_of(kids.begin(), kids.end(), [&](VertexId c) {
            return sectors.count(c) != 0;
        });
        if (!complete) {
            kept.push_back(v);
            continue;
        }
        for (VertexId c : kids) sectors.erase(c);
        sectors.insert(v);
    }
    return Region::canonical(tp, {sectors.begin(), sectors.end()}, std::move(kept));
}

double region_mass(const MeasureParams& mp, const Region& r) {
    double sum = 0.0;
    for (VertexId v : r.sectors) sum += sector_mass(mp, v);
    for (VertexId v : r.singletons) sum += point_mass(mp, v);
    return sum;
}

DoublingReport verify_doubling(const MeasureParams& mp, unsigned max_depth,
                               const std::vector<double>& radii) {
    DoublingReport rep;
    rep.constant = doubling_constant(mp);
    const VertexId last = cumulative_count(mp.tree, max_depth);
    for (VertexId x = 0; x <= last; ++x) {
        for (double r : radii) {
            const double small = set_mass(mp, gromov_ball(mp.tree, x, r).resolved);
            const double big = set_mass(mp, gromov_ball(mp.tree, x, 2.0 * r).resolved);
            const double ratio = big / small;
            ++rep.checked;
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_vertex = x;
                rep.worst_radius = r;
            }
        }
    }
    rep.pass = rep.worst_ratio <= rep.constant * (1.0 + 1e-9);
    return rep;
}

std::vector<double> doubling_radius_grid(unsigned max_depth, std::size_t count) {
    std::vector<double> g;
    for (unsigned n = 0; n <= max_depth; ++n) {
        const double b = std::exp(-static_cast<double>(n));
        g.push_back(b * (1.0 - 1e-6));
        g.push_back(b);
        g.push_back(b * (1.0 + 1e-6));
    }
    g.push_back(1.25);
    g.push_back(1.5);
    g.push_back(2.0);
    // Log-spaced fill across the full resolved range, dodging the
    // boundaries already present.
    const double lo = std::exp(-static_cast<double>(max_depth) - 0.4);
    const double hi = 2.5;
    const std::size_t fill = (g.size() < count) ? count - g.size() : 0;
    for (std::size_t i = 0; i < fill; ++i) {
        const double t = (static_cast<double>(i) + 0.618) / static_cast<double>(fill);
        g.push_back(lo * std::pow(hi / lo, t));
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

void validate_reference(const TreeParams& tp, const ReferenceMeasure& rm) {
    if (rm.radial_values.empty())
        throw validation_error("reference measure needs at least one head value");
    for (double s : rm.radial_values)
        if (!(s > 0.0)) throw validation_error("reference measure values must be positive");
    for (std::size_t n = 0; n + 1 < rm.radial_values.size(); ++n)
        if (rm.radial_values[n] < rm.radial_values[n + 1])
            throw validation_error("reference measure must be radially nonincreasing");
    if (!(rm.tail_ratio > 0.0) || !(rm.tail_ratio < 1.0 / static_cast<double>(tp.q)))
        throw validation_error("tail ratio must lie in (0, 1/q)");
}

double reference_point(const ReferenceMeasure& rm, unsigned n) {
    const std::size_t head = rm.radial_values.size();
    if (n < head) return rm.radial_values[n];
    return rm.radial_values.back() *
           std::pow(rm.tail_ratio, static_cast<double>(n - (head - 1)));
}

double reference_sector(const TreeParams& tp, const ReferenceMeasure& rm, unsigned n) {
    if (n == 0) throw precondition_error("subtree of the root is the whole space");
    const double q = static_cast<double>(tp.q);
    const std::size_t head = rm.radial_values.size();
    const unsigned tail_from = (head > n) ? static_cast<unsigned>(head) - 1 - n : 0;
    double sum = 0.0;
    double weight = 1.0; // q^l vertices at distance l below the vertex
    for (unsigned l = 0; l < tail_from; ++l, weight *= q)
        sum += weight * reference_point(rm, n + l);
    // From tail_from on, each level multiplies by q * tail_ratio.
    sum += weight * reference_point(rm, n + tail_from) / (1.0 - q * rm.tail_ratio);
    return sum;
}

double reference_total(const TreeParams& tp, const ReferenceMeasure& rm) {
    return reference_point(rm, 0) +
           static_cast<double>(tp.q + 1) * reference_sector(tp, rm, 1);
}

double optimality_ratio(const TreeParams& tp, const ReferenceMeasure& rm) {
    validate_reference(tp, rm);
    const double q = static_cast<double>(tp.q);
    double worst = 1.0 / (1.0 - q * rm.tail_ratio); // exact value at all tail depths
    for (unsigned n = 1; n < rm.radial_values.size(); ++n)
        worst = std::max(worst, reference_sector(tp, rm, n) / reference_point(rm, n));
    return worst;
}

double parent_ratio(const ReferenceMeasure& rm) {
    double worst = 1.0 / rm.tail_ratio;
    for (std::size_t n = 0; n + 1 < rm.radial_values.size(); ++n)
        worst = std::max(worst, rm.radial_values[n] / rm.radial_values[n + 1]);
    return worst;
}

ReferenceClassification classify_reference_measure(const TreeParams& tp,
                                                   const ReferenceMeasure& rm,
                                                   double bound) {
    ReferenceClassification out;
    out.bound = bound;
    out.optimality = optimality_ratio(tp, rm);
    out.parent = parent_ratio(rm);
    out.optimal = out.optimality <= bound;
    out.parent_bounded = out.parent <= bound;
    return out;
}

ReferenceMeasure reference_from_measure(const MeasureParams& mp, unsigned head_depth) {
    ReferenceMeasure rm;
    const double q = static_cast<double>(mp.tree.q);
    for (unsigned n = 0; n <= head_depth; ++n)
        rm.radial_values.push_back(std::pow(q, -mp.alpha * n));
    rm.tail_ratio = std::pow(q, -mp.alpha);
    return rm;
}

} // namespace treeharm

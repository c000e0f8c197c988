#include "treeharm/function.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace treeharm {

namespace {

using Complex = std::complex<double>;

// First and last label of the descendants of [lo, hi] one level down.
void next_level(const TreeParams& tp, VertexId& lo, VertexId& hi) {
    const VertexId q = tp.q;
    lo = (lo == 0) ? 1 : q * lo + 2;
    hi = (hi == 0) ? q + 1 : q * hi + q + 1;
}

unsigned require_same_parameters(const TailConstantFunction& f,
                                 const TailConstantFunction& g) {
    if (f.params.tree.q != g.params.tree.q || f.params.alpha != g.params.alpha)
        throw validation_error("function parameters differ");
    return std::max(f.boundary_depth, g.boundary_depth);
}

TailConstantFunction map_values(const TailConstantFunction& f,
                                const std::function<Complex(Complex)>& op) {
    std::vector<Complex> vals(f.values.size());
    std::transform(f.values.begin(), f.values.end(), vals.begin(), op);
    return {f.params, f.boundary_depth, std::move(vals)};
}

} // namespace

TailConstantFunction::TailConstantFunction(MeasureParams mp, unsigned depth_bound,
                                           std::vector<Complex> vals)
    : params(mp), boundary_depth(depth_bound), values(std::move(vals)) {
    if (values.size() != cumulative_count(params.tree, boundary_depth) + 1)
        throw validation_error("value table does not match boundary depth");
}

TailConstantFunction constant_function(const MeasureParams& mp, Complex c) {
    return {mp, 0, {c}};
}

TailConstantFunction indicator(const MeasureParams& mp, const DyadicSet& d) {
    if (d.kind == SetKind::whole) return constant_function(mp, 1.0);
    const unsigned depth_bound = (d.kind == SetKind::sector)
                                     ? depth(mp.tree, d.vertex)
                                     : depth(mp.tree, d.vertex) + 1;
    std::vector<Complex> vals(cumulative_count(mp.tree, depth_bound) + 1, 0.0);
    vals[d.vertex] = 1.0;
    return {mp, depth_bound, std::move(vals)};
}

Complex evaluate(const TailConstantFunction& f, VertexId x) {
    if (x < f.values.size()) return f.values[x];
    const unsigned d = depth(f.params.tree, x);
    return f.values[iterated_parent(f.params.tree, x, d - f.boundary_depth)];
}

TailConstantFunction push_boundary_down(const TailConstantFunction& f,
                                        unsigned depth_bound) {
    if (depth_bound < f.boundary_depth)
        throw precondition_error("boundary can only move down");
    if (depth_bound == f.boundary_depth) return f;
    std::vector<Complex> vals = f.values;
    vals.resize(cumulative_count(f.params.tree, depth_bound) + 1);
    for (std::size_t k = f.values.size(); k < vals.size(); ++k)
        vals[k] = vals[parent(f.params.tree, static_cast<VertexId>(k))];
    return {f.params, depth_bound, std::move(vals)};
}

TailConstantFunction add(const TailConstantFunction& f, const TailConstantFunction& g) {
    const unsigned depth_bound = require_same_parameters(f, g);
    TailConstantFunction a = push_boundary_down(f, depth_bound);
    const TailConstantFunction b = push_boundary_down(g, depth_bound);
    for (std::size_t k = 0; k < a.values.size(); ++k) a.values[k] += b.values[k];
    return a;
}

TailConstantFunction subtract(const TailConstantFunction& f, const TailConstantFunction& g) {
    return add(f, scale(g, -1.0));
}

TailConstantFunction multiply(const TailConstantFunction& f, const TailConstantFunction& g) {
    const unsigned depth_bound = require_same_parameters(f, g);
    TailConstantFunction a = push_boundary_down(f, depth_bound);
    const TailConstantFunction b = push_boundary_down(g, depth_bound);
    for (std::size_t k = 0; k < a.values.size(); ++k) a.values[k] *= b.values[k];
    return a;
}

TailConstantFunction scale(const TailConstantFunction& f, Complex c) {
    return map_values(f, [c](Complex z) { return c * z; });
}

TailConstantFunction abs_value(const TailConstantFunction& f) {
    return map_values(f, [](Complex z) { return Complex(std::abs(z), 0.0); });
}

TailConstantFunction conjugate(const TailConstantFunction& f) {
    return map_values(f, [](Complex z) { return std::conj(z); });
}

TailConstantFunction restrict_to_set(const TailConstantFunction& f, const DyadicSet& d) {
    if (d.kind == SetKind::whole) return f;
    const TreeParams& tp = f.params.tree;
    const unsigned vertex_depth = depth(tp, d.vertex);
    const unsigned depth_bound = std::max(
        f.boundary_depth, (d.kind == SetKind::sector) ? vertex_depth : vertex_depth + 1);
    TailConstantFunction out = push_boundary_down(f, depth_bound);
    if (d.kind == SetKind::singleton) {
        const Complex kept = out.values[d.vertex];
        std::fill(out.values.begin(), out.values.end(), Complex(0.0));
        out.values[d.vertex] = kept;
        return out;
    }
    VertexId lo = d.vertex;
    VertexId hi = d.vertex;
    for (unsigned dd = vertex_depth; dd <= depth_bound; ++dd) {
        const auto [first, last] = level_range(tp, dd);
        for (VertexId k = first; k < lo; ++k) out.values[k] = 0.0;
        for (VertexId k = hi + 1; k <= last; ++k) out.values[k] = 0.0;
        next_level(tp, lo, hi);
    }
    for (unsigned dd = 0; dd < vertex_depth; ++dd) {
        const auto [first, last] = level_range(tp, dd);
        for (VertexId k = first; k <= last; ++k) out.values[k] = 0.0;
    }
    return out;
}

TailConstantFunction restrict_to_region(const TailConstantFunction& f, const Region& r) {
    const TreeParams& tp = f.params.tree;
    unsigned depth_bound = f.boundary_depth;
    for (VertexId v : r.sectors) depth_bound = std::max(depth_bound, depth(tp, v));
    for (VertexId v : r.singletons) depth_bound = std::max(depth_bound, depth(tp, v) + 1);
    TailConstantFunction out = push_boundary_down(f, depth_bound);
    const std::unordered_set<VertexId> singles(r.singletons.begin(), r.singletons.end());
    const std::unordered_set<VertexId> sectors(r.sectors.begin(), r.sectors.end());
    const auto inside = [&](VertexId x) {
        if (singles.count(x) != 0 || sectors.count(x) != 0) return true;
        for (VertexId a = x; a != 0;) {
            a = parent(tp, a);
            if (sectors.count(a) != 0) return true;
        }
        return false;
    };
    for (std::size_t k = 0; k < out.values.size(); ++k)
        if (!inside(static_cast<VertexId>(k))) out.values[k] = 0.0;
    return out;
}

void for_each_piece(const TailConstantFunction& f, const DyadicSet& d,
                    const std::function<void(VertexId, Complex, double)>& emit) {
    const MeasureParams& mp = f.params;
    const TreeParams& tp = mp.tree;
    if (d.kind == SetKind::singleton) {
        emit(d.vertex, evaluate(f, d.vertex), point_mass(mp, d.vertex));
        return;
    }
    const VertexId root = (d.kind == SetKind::whole) ? 0 : d.vertex;
    const unsigned root_depth = depth(tp, root);
    if (root_depth >= f.boundary_depth && root != 0) {
        emit(root, evaluate(f, root), sector_mass(mp, root));
        return;
    }
    if (f.boundary_depth == 0) {
        emit(0, f.values[0], set_mass(mp, d));
        return;
    }
    VertexId lo = root;
    VertexId hi = root;
    for (unsigned dd = root_depth; dd <= f.boundary_depth; ++dd) {
        const double w = (dd == f.boundary_depth) ? sector_mass(mp, lo) : point_mass(mp, lo);
        for (VertexId k = lo; k <= hi; ++k) emit(k, f.values[k], w);
        next_level(tp, lo, hi);
    }
}

std::complex<double> integral(const TailConstantFunction& f) {
    return integral_over(f, DyadicSet::whole_space());
}

std::complex<double> integral_over(const TailConstantFunction& f, const DyadicSet& d) {
    Complex sum = 0.0;
    for_each_piece(f, d, [&](VertexId, Complex v, double w) { sum += v * w; });
    return sum;
}

std::complex<double> average_on(const TailConstantFunction& f, const DyadicSet& d) {
    return integral_over(f, d) / set_mass(f.params, d);
}

double lp_norm(const TailConstantFunction& f, double p) {
    if (std::isinf(p)) {
        double sup = 0.0;
        for (Complex v : f.values) sup = std::max(sup, std::abs(v));
        return sup;
    }
    if (!(p >= 1.0)) throw precondition_error("norm exponent must be at least 1");
    double sum = 0.0;
    for_each_piece(f, DyadicSet::whole_space(),
                   [&](VertexId, Complex v, double w) { sum += std::pow(std::abs(v), p) * w; });
    return std::pow(sum, 1.0 / p);
}

double oscillation(const TailConstantFunction& f, const DyadicSet& d, double r) {
    if (!(r >= 1.0)) throw precondition_error("norm exponent must be at least 1");
    const Complex c = average_on(f, d);
    double sum = 0.0;
    for_each_piece(f, d, [&](VertexId, Complex v, double w) {
        sum += std::pow(std::abs(v - c), r) * w;
    });
    return std::pow(sum / set_mass(f.params, d), 1.0 / r);
}

Region region_where(const TailConstantFunction& f,
                    const std::function<bool(double)>& pred) {
    for (Complex v : f.values)
        if (v.imag() != 0.0) throw validation_error("level sets need real values");
    const TreeParams& tp = f.params.tree;
    std::vector<VertexId> sectors;
    std::vector<VertexId> singletons;
    const VertexId boundary_first =
        (f.boundary_depth == 0) ? 0 : level_range(tp, f.boundary_depth).first;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        if (!pred(f.values[k].real())) continue;
        if (static_cast<VertexId>(k) >= boundary_first)
            sectors.push_back(static_cast<VertexId>(k));
        else
            singletons.push_back(static_cast<VertexId>(k));
    }
    return region_merged(tp,
                         Region::canonical(tp, std::move(sectors), std::move(singletons)));
}

LevelReport level_region(const TailConstantFunction& f, double threshold) {
    LevelReport rep;
    rep.region = region_where(f, [threshold](double v) { return v > threshold; });
    rep.mass = region_mass(f.params, rep.region);
    return rep;
}

} // namespace treeharm

#include "treeharm/json_io.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace treeharm {

namespace {

using nlohmann::json;
using Complex = std::complex<double>;

[[noreturn]] void bad(const std::string& what) {
    throw validation_error(what + " json invalid");
}

double number(const json& j, const char* what) {
    if (!j.is_number()) bad(what);
    return j.get<double>();
}

std::uint64_t natural(const json& j, const char* what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    bad(what);
}

unsigned small_natural(const json& j, const char* what) {
    const std::uint64_t v = natural(j, what);
    if (v > 1000000) bad(what);
    return static_cast<unsigned>(v);
}

const json& field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) bad(what);
    return j[key];
}

std::vector<VertexId> natural_list(const json& j, const char* what) {
    if (!j.is_array()) bad(what);
    std::vector<VertexId> out;
    out.reserve(j.size());
    for (const json& item : j) out.push_back(natural(item, what));
    return out;
}

} // namespace

json function_to_json(const TailConstantFunction& f) {
    json values = json::array();
    for (std::size_t k = 0; k < f.values.size(); ++k)
        values.push_back(json::array(
            {static_cast<std::uint64_t>(k), f.values[k].real(), f.values[k].imag()}));
    return {{"q", f.params.tree.q},
            {"alpha", f.params.alpha},
            {"boundary_depth", f.boundary_depth},
            {"values", std::move(values)}};
}

TailConstantFunction function_from_json(const json& j) {
    const char* what = "function";
    const TreeParams tp(small_natural(field(j, "q", what), what));
    const MeasureParams mp(tp, number(field(j, "alpha", what), what));
    const unsigned boundary = small_natural(field(j, "boundary_depth", what), what);
    const json& rows = field(j, "values", what);
    if (!rows.is_array()) bad(what);

    const std::size_t count = cumulative_count(tp, boundary) + 1;
    std::vector<Complex> vals(count);
    std::vector<char> seen(count, 0);
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != 3) bad(what);
        const std::uint64_t k = natural(row[0], what);
        if (k >= count || seen[k]) bad(what);
        seen[k] = 1;
        vals[k] = {number(row[1], what), number(row[2], what)};
    }
    for (char s : seen)
        if (!s) bad(what);
    return {mp, boundary, std::move(vals)};
}

json dyadic_to_json(const DyadicSet& d) {
    switch (d.kind) {
        case SetKind::whole: return {{"kind", "whole"}};
        case SetKind::sector: return {{"kind", "sector"}, {"vertex", d.vertex}};
        case SetKind::singleton: return {{"kind", "singleton"}, {"vertex", d.vertex}};
    }
    bad("dyadic set");
}

DyadicSet dyadic_from_json(const json& j) {
    const char* what = "dyadic set";
    const json& kind = field(j, "kind", what);
    if (!kind.is_string()) bad(what);
    const std::string name = kind.get<std::string>();
    if (name == "whole") return DyadicSet::whole_space();
    const VertexId vertex = natural(field(j, "vertex", what), what);
    if (name == "sector") return DyadicSet::sector(vertex);
    if (name == "singleton") return DyadicSet::singleton(vertex);
    bad(what);
}

json region_to_json(const Region& r) {
    return {{"sectors", r.sectors}, {"singletons", r.singletons}};
}

Region region_from_json(const TreeParams& tp, const json& j) {
    const char* what = "region";
    return Region::checked(tp, natural_list(field(j, "sectors", what), what),
                           natural_list(field(j, "singletons", what), what));
}

json atom_to_json(const Atom& a) {
    if (std::holds_alternative<ConstantAtom>(a)) return {{"kind", "constant"}};
    const StandardAtom& atom = std::get<StandardAtom>(a);
    return {{"kind", "standard"},
            {"set", dyadic_to_json(atom.set)},
            {"values", function_to_json(atom.values)},
            {"p", std::isinf(atom.p) ? json("infinity") : json(atom.p)}};
}

Atom atom_from_json(const json& j) {
    const char* what = "atom";
    const json& kind = field(j, "kind", what);
    if (!kind.is_string()) bad(what);
    const std::string name = kind.get<std::string>();
    if (name == "constant") return ConstantAtom{};
    if (name != "standard") bad(what);
    const json& p = field(j, "p", what);
    double exponent = 0.0;
    if (p.is_string() && p.get<std::string>() == "infinity")
        exponent = std::numeric_limits<double>::infinity();
    else
        exponent = number(p, what);
    return StandardAtom{dyadic_from_json(field(j, "set", what)),
                        function_from_json(field(j, "values", what)), exponent};
}

json decomposition_to_json(const AtomicDecomposition& dec) {
    json rows = json::array();
    for (const auto& [coefficient, atom] : dec.terms)
        rows.push_back(
            json::array({coefficient.real(), coefficient.imag(), atom_to_json(atom)}));
    return rows;
}

AtomicDecomposition decomposition_from_json(const json& j) {
    const char* what = "decomposition";
    if (!j.is_array()) bad(what);
    AtomicDecomposition dec;
    for (const json& row : j) {
        if (!row.is_array() || row.size() != 3) bad(what);
        dec.terms.emplace_back(Complex(number(row[0], what), number(row[1], what)),
                               atom_from_json(row[2]));
    }
    return dec;
}

json kernel_to_json(const FiniteKernel& k) {
    json rows = json::array();
    for (const auto& [zx, value] : k.entries)
        rows.push_back(json::array({zx.first, zx.second, value.real(), value.imag()}));
    return {{"entries", std::move(rows)}};
}

FiniteKernel kernel_from_json(const TreeParams& tp, const json& j) {
    const char* what = "kernel";
    const json& rows = field(j, "entries", what);
    if (!rows.is_array()) bad(what);
    std::map<std::pair<VertexId, VertexId>, Complex> table;
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != 4) bad(what);
        const VertexId z = natural(row[0], what);
        const VertexId x = natural(row[1], what);
        const Complex value(number(row[2], what), number(row[3], what));
        if (!table.emplace(std::make_pair(z, x), value).second) bad(what);
    }
    return {tp, std::move(table)};
}

json cz_to_json(const CZOutput& out) {
    json stopping = json::array();
    for (const DyadicSet& d : out.stopping) stopping.push_back(dyadic_to_json(d));
    json parts = json::array();
    for (const auto& [set, values] : out.bad_parts) parts.push_back(function_to_json(values));
    return {{"lambda", out.lambda},
            {"Q", std::move(stopping)},
            {"F", region_to_json(out.untouched)},
            {"g", function_to_json(out.good)},
            {"b_parts", std::move(parts)}};
}

CZOutput cz_from_json(const json& j) {
    const char* what = "cz output";
    TailConstantFunction good = function_from_json(field(j, "g", what));
    const TreeParams tp = good.params.tree;

    const json& stops = field(j, "Q", what);
    const json& parts = field(j, "b_parts", what);
    if (!stops.is_array() || !parts.is_array() || stops.size() != parts.size()) bad(what);

    std::vector<DyadicSet> stopping;
    std::vector<std::pair<DyadicSet, TailConstantFunction>> bad_parts;
    for (std::size_t i = 0; i < stops.size(); ++i) {
        stopping.push_back(dyadic_from_json(stops[i]));
        TailConstantFunction values = function_from_json(parts[i]);
        if (values.params.tree.q != tp.q || values.params.alpha != good.params.alpha)
            bad(what);
        bad_parts.emplace_back(stopping.back(), std::move(values));
    }

    return {number(field(j, "lambda", what), what), std::move(stopping),
            region_from_json(tp, field(j, "F", what)), std::move(good),
            std::move(bad_parts)};
}

json reference_to_json(const ReferenceMeasure& rm) {
    return {{"radial_values", rm.radial_values}, {"tail_ratio", rm.tail_ratio}};
}

ReferenceMeasure reference_from_json(const json& j) {
    const char* what = "reference measure";
    const json& values = field(j, "radial_values", what);
    if (!values.is_array()) bad(what);
    ReferenceMeasure rm;
    for (const json& item : values) rm.radial_values.push_back(number(item, what));
    rm.tail_ratio = number(field(j, "tail_ratio", what), what);
    return rm;
}

} // namespace treeharm

#pragma once

#include "json.hpp"

#include "treeharm/kernel.hpp"
#include "treeharm/maximal.hpp"

namespace treeharm {

// Wire formats. Every emitter sorts keys and entry lists, so equal values
// serialize to identical bytes; every parser validates shape and content and
// throws validation_error on anything structurally wrong. Exponents may be
// infinite, which JSON numbers cannot carry, so they travel as the string
// "infinity" instead.

// {"q":..., "alpha":..., "boundary_depth":N, "values":[[k,re,im],...]} with
// one triple for every vertex of depth at most N.
nlohmann::json function_to_json(const TailConstantFunction& f);
TailConstantFunction function_from_json(const nlohmann::json& j);

// {"kind":"whole"} | {"kind":"sector","vertex":k} | {"kind":"singleton","vertex":k}
nlohmann::json dyadic_to_json(const DyadicSet& d);
DyadicSet dyadic_from_json(const nlohmann::json& j);

// {"sectors":[...], "singletons":[...]}, canonical listings only.
nlohmann::json region_to_json(const Region& r);
Region region_from_json(const TreeParams& tp, const nlohmann::json& j);

// {"kind":"constant"} | {"kind":"standard","set":...,"values":...,"p":...}
nlohmann::json atom_to_json(const Atom& a);
Atom atom_from_json(const nlohmann::json& j);

// [[coefficient_re, coefficient_im, atom], ...]
nlohmann::json decomposition_to_json(const AtomicDecomposition& dec);
AtomicDecomposition decomposition_from_json(const nlohmann::json& j);

// {"entries":[[z,x,re,im],...]} sorted by (z, x).
nlohmann::json kernel_to_json(const FiniteKernel& k);
FiniteKernel kernel_from_json(const TreeParams& tp, const nlohmann::json& j);

// {"lambda":..., "Q":[...], "F":..., "g":..., "b_parts":[...]} with b_parts
// aligned index by index with Q.
nlohmann::json cz_to_json(const CZOutput& out);
CZOutput cz_from_json(const nlohmann::json& j);

// {"radial_values":[...], "tail_ratio":t}
nlohmann::json reference_to_json(const ReferenceMeasure& rm);
ReferenceMeasure reference_from_json(const nlohmann::json& j);

} // namespace treeharm

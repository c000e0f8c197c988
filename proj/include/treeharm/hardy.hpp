#pragma once

#include <variant>
#include <vector>

#include "treeharm/function.hpp"

namespace treeharm {

// The normalized constant building block: its value is the reciprocal of the
// total mass, computed where needed rather than stored.
struct ConstantAtom {
    bool operator==(const ConstantAtom&) const = default;
};

// A mean-zero building block living on one dyadic set, with its p-norm
// capped by the mass of that set to the power 1/p - 1.
struct StandardAtom {
    DyadicSet set;
    TailConstantFunction values;
    double p = 0.0;
};

using Atom = std::variant<ConstantAtom, StandardAtom>;

struct AtomCheck {
    bool valid = true;
    bool exponent_ok = true;  // p must exceed 1 (infinity allowed)
    bool support_ok = true;   // vanishes outside the set
    bool size_ok = true;      // p-norm within the mass bound
    bool mean_ok = true;      // integral over the set below tolerance
    double size_norm = 0.0;
    double size_bound = 0.0;
    double mean_modulus = 0.0;
    double stray_sup = 0.0;   // largest value seen outside the set
};

AtomCheck validate_atom(const MeasureParams& mp, const Atom& a);

// The atom as a function on the tree.
TailConstantFunction atom_function(const MeasureParams& mp, const Atom& a);

struct AtomicDecomposition {
    std::vector<std::pair<std::complex<double>, Atom>> terms;
};

// Writes f as coefficient-weighted atoms: the global average rides the
// constant atom, and each refinement step from one layer to the next
// contributes a mean-zero difference per sector, rescaled to a sup-norm
// atom. The sum reconstructs f exactly; vanishing pieces are dropped.
AtomicDecomposition atomic_decompose(const TailConstantFunction& f);

// Sum of coefficient moduli of the produced decomposition: an upper bound
// for the infimum over all decompositions.
double h1_norm_upper(const TailConstantFunction& f);

// Largest r-oscillation over the whole space and the sectors down to the
// boundary, plus the modulus of the integral. Deeper sets cannot oscillate.
double bmo_norm(const TailConstantFunction& f, double r);

struct InboxingReport {
    double r = 0.0;
    double narrow_norm = 0.0; // r = 1
    double wide_norm = 0.0;   // the given r
    bool holds = true;
};

InboxingReport inboxing_check(const TailConstantFunction& f, double r);

// The plain integral of f times the atom.
std::complex<double> duality_pairing(const TailConstantFunction& f, const Atom& a);

} // namespace treeharm

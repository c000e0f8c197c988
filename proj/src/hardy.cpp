#include "treeharm/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treeharm {

namespace {

using Complex = std::complex<double>;

constexpr double kAtomTol = 1e-10;
constexpr double kDropFactor = 1e-14;

} // namespace

AtomCheck validate_atom(const MeasureParams& mp, const Atom& a) {
    AtomCheck check;
    if (std::holds_alternative<ConstantAtom>(a)) return check;

    const StandardAtom& atom = std::get<StandardAtom>(a);
    check.exponent_ok = atom.p > 1.0;
    if (atom.values.params.tree.q != mp.tree.q || atom.values.params.alpha != mp.alpha)
        check.exponent_ok = false;
    if (!check.exponent_ok) {
        check.valid = false;
        return check;
    }

    const TailConstantFunction inside = restrict_to_set(atom.values, atom.set);
    const TailConstantFunction outside = subtract(atom.values, inside);
    check.stray_sup = lp_norm(outside, std::numeric_limits<double>::infinity());
    check.support_ok = check.stray_sup <= kAtomTol;

    const double mass = set_mass(mp, atom.set);
    check.size_norm = lp_norm(atom.values, atom.p);
    check.size_bound = std::isinf(atom.p) ? 1.0 / mass
                                          : std::pow(mass, 1.0 / atom.p - 1.0);
    check.size_ok = check.size_norm <= check.size_bound + kAtomTol;

    check.mean_modulus = std::abs(integral_over(atom.values, atom.set));
    check.mean_ok = check.mean_modulus <= kAtomTol;

    check.valid = check.support_ok && check.size_ok && check.mean_ok;
    return check;
}

TailConstantFunction atom_function(const MeasureParams& mp, const Atom& a) {
    if (std::holds_alternative<ConstantAtom>(a))
        return constant_function(mp, 1.0 / total_mass(mp));
    return std::get<StandardAtom>(a).values;
}

AtomicDecomposition atomic_decompose(const TailConstantFunction& f) {
    const MeasureParams& mp = f.params;
    const TreeParams& tp = mp.tree;
    AtomicDecomposition out;
    const double overall = lp_norm(f, std::numeric_limits<double>::infinity());
    if (overall == 0.0) return out;

    const Complex total = integral(f);
    if (std::abs(total) > kDropFactor * overall)
        out.terms.emplace_back(total, ConstantAtom{});

    // One refinement step per layer: each sector of the coarser layer sheds
    // the difference between the averages one level down and its own.
    for (unsigned m = 1; m <= f.boundary_depth; ++m) {
        std::vector<DyadicSet> coarse;
        if (m == 1) {
            coarse.push_back(DyadicSet::whole_space());
        } else {
            const auto [first, last] = level_range(tp, m - 1);
            for (VertexId v = first; v <= last; ++v) coarse.push_back(DyadicSet::sector(v));
        }
        for (const DyadicSet& d : coarse) {
            const VertexId root = (d.kind == SetKind::whole) ? 0 : d.vertex;
            const Complex here = average_on(f, d);
            std::vector<Complex> vals(cumulative_count(tp, m) + 1, 0.0);
            double sup = 0.0;
            vals[root] = evaluate(f, root) - here;
            sup = std::abs(vals[root]);
            for (VertexId c : children(tp, root)) {
                vals[c] = average_on(f, DyadicSet::sector(c)) - here;
                sup = std::max(sup, std::abs(vals[c]));
            }
            if (sup <= kDropFactor * overall) continue;
            const double coefficient = sup * set_mass(mp, d);
            const TailConstantFunction diff(mp, m, std::move(vals));
            out.terms.emplace_back(
                coefficient, StandardAtom{d, scale(diff, 1.0 / coefficient),
                                          std::numeric_limits<double>::infinity()});
        }
    }
    return out;
}

double h1_norm_upper(const TailConstantFunction& f) {
    double sum = 0.0;
    for (const auto& [coefficient, atom] : atomic_decompose(f).terms)
        sum += std::abs(coefficient);
    return sum;
}

double bmo_norm(const TailConstantFunction& f, double r) {
    if (!(r >= 1.0)) throw precondition_error("norm exponent must be at least 1");
    double sup = oscillation(f, DyadicSet::whole_space(), r);
    for (unsigned d = 1; d <= f.boundary_depth; ++d) {
        const auto [first, last] = level_range(f.params.tree, d);
        for (VertexId v = first; v <= last; ++v)
            sup = std::max(sup, oscillation(f, DyadicSet::sector(v), r));
    }
    return sup + std::abs(integral(f));
}

InboxingReport inboxing_check(const TailConstantFunction& f, double r) {
    if (!(r > 1.0)) throw precondition_error("exponent must exceed 1");
    InboxingReport rep;
    rep.r = r;
    rep.narrow_norm = bmo_norm(f, 1.0);
    rep.wide_norm = bmo_norm(f, r);
    rep.holds = rep.narrow_norm <= rep.wide_norm * (1.0 + 1e-9) + 1e-15;
    return rep;
}

std::complex<double> duality_pairing(const TailConstantFunction& f, const Atom& a) {
    if (!validate_atom(f.params, a).valid) throw validation_error("not an atom");
    return integral(multiply(f, atom_function(f.params, a)));
}

} // namespace treeharm

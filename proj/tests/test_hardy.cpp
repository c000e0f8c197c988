#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "treeharm/hardy.hpp"

using namespace treeharm;
using Complex = std::complex<double>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic varied values, no RNG needed.
TailConstantFunction wavy(const MeasureParams& mp, unsigned depth_bound) {
    std::vector<Complex> vals(cumulative_count(mp.tree, depth_bound) + 1);
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const double t = static_cast<double>(k);
        vals[k] = Complex(std::sin(t + 0.3), std::cos(2.0 * t));
    }
    return {mp, depth_bound, std::move(vals)};
}

bool inside_set(const TreeParams& tp, const DyadicSet& d, VertexId x) {
    switch (d.kind) {
        case SetKind::whole: return true;
        case SetKind::singleton: return x == d.vertex;
        case SetKind::sector:
            for (VertexId a = x;; a = parent(tp, a)) {
                if (a == d.vertex) return true;
                if (a == 0) return false;
            }
    }
    return false;
}

// Weight of one value-table slot by truncated series only: a point weight
// above the boundary, a tail sum on it. Independent of the closed forms.
double series_slot_weight(const TailConstantFunction& f, VertexId v) {
    const MeasureParams& mp = f.params;
    const double q = static_cast<double>(mp.tree.q);
    const unsigned d = depth(mp.tree, v);
    if (d < f.boundary_depth) return std::pow(q, -mp.alpha * static_cast<double>(d));
    double sum = 0.0;
    double count = 1.0;
    for (unsigned l = 0; l < 400; ++l) {
        sum += count * std::pow(q, -mp.alpha * static_cast<double>(d + l));
        // The root fans out to q+1 children, every other vertex to q.
        count *= (v == 0 && l == 0) ? q + 1.0 : q;
    }
    return sum;
}

Complex brute_average(const TailConstantFunction& f, const DyadicSet& d) {
    Complex num = 0.0;
    double den = 0.0;
    for (VertexId v = 0; v < f.values.size(); ++v) {
        if (!inside_set(f.params.tree, d, v)) continue;
        const double w = series_slot_weight(f, v);
        num += f.values[v] * w;
        den += w;
    }
    return num / den;
}

double brute_oscillation(const TailConstantFunction& f, const DyadicSet& d, double r) {
    const Complex c = brute_average(f, d);
    double num = 0.0;
    double den = 0.0;
    for (VertexId v = 0; v < f.values.size(); ++v) {
        if (!inside_set(f.params.tree, d, v)) continue;
        const double w = series_slot_weight(f, v);
        num += std::pow(std::abs(f.values[v] - c), r) * w;
        den += w;
    }
    return std::pow(num / den, 1.0 / r);
}

double brute_bmo(const TailConstantFunction& f, double r) {
    double sup = brute_oscillation(f, DyadicSet::whole_space(), r);
    for (unsigned d = 1; d <= f.boundary_depth; ++d) {
        const auto [first, last] = level_range(f.params.tree, d);
        for (VertexId v = first; v <= last; ++v)
            sup = std::max(sup, brute_oscillation(f, DyadicSet::sector(v), r));
    }
    Complex total = 0.0;
    for (VertexId v = 0; v < f.values.size(); ++v)
        total += f.values[v] * series_slot_weight(f, v);
    return sup + std::abs(total);
}

// Sibling-difference atom on the sector at v: +s on one child subtree, -s on
// another, zero elsewhere. Mean zero by symmetry of the child masses.
StandardAtom sibling_atom(const MeasureParams& mp, VertexId v, double s, double p) {
    const auto kids = children(mp.tree, v);
    const unsigned bound = depth(mp.tree, v) + 1;
    std::vector<Complex> vals(cumulative_count(mp.tree, bound) + 1, 0.0);
    vals[kids[0]] = s;
    vals[kids[1]] = -s;
    return {DyadicSet::sector(v), TailConstantFunction(mp, bound, std::move(vals)), p};
}

bool close(Complex a, Complex b, double tol = 1e-11) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_SUITE("hardy") {

TEST_CASE("constant atom is always valid and integrates to one") {
    for (unsigned q : {2u, 3u}) {
        for (double alpha : {1.2, 2.0}) {
            const MeasureParams mp(TreeParams(q), alpha);
            const Atom a = ConstantAtom{};
            CHECK(validate_atom(mp, a).valid);
            const TailConstantFunction g = atom_function(mp, a);
            CHECK(close(evaluate(g, 0), 1.0 / total_mass(mp), 1e-14));
            CHECK(close(integral(g), 1.0, 1e-12));
        }
    }
}

TEST_CASE("sibling difference atoms pass at the exact size bound") {
    const MeasureParams mp(TreeParams(2), 2.0);
    // Sector at vertex 1 has mass 1/2, so the sup bound is 2.
    const AtomCheck at_bound = validate_atom(mp, sibling_atom(mp, 1, 2.0, kInf));
    CHECK(at_bound.valid);
    CHECK(at_bound.size_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(at_bound.size_bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(at_bound.mean_modulus <= 1e-14);
    CHECK(at_bound.stray_sup == 0.0);

    const AtomCheck too_big = validate_atom(mp, sibling_atom(mp, 1, 2.1, kInf));
    CHECK_FALSE(too_big.valid);
    CHECK_FALSE(too_big.size_ok);
    CHECK(too_big.support_ok);
    CHECK(too_big.mean_ok);

    // With p = 2 the same shape sits well inside the bound: the norm is
    // |s| (2 / 8)^{1/2} = 1 and the bound is (1/2)^{-1/2}.
    const AtomCheck square = validate_atom(mp, sibling_atom(mp, 1, 2.0, 2.0));
    CHECK(square.valid);
    CHECK(square.size_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(square.size_bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("validation flags single failures") {
    const MeasureParams mp(TreeParams(2), 2.0);

    StandardAtom lopsided = sibling_atom(mp, 1, 1.0, kInf);
    lopsided.values.values[5] = 0.0; // keep only the +1 child: mean moves off zero
    const AtomCheck mean_bad = validate_atom(mp, lopsided);
    CHECK_FALSE(mean_bad.valid);
    CHECK_FALSE(mean_bad.mean_ok);
    CHECK(mean_bad.mean_modulus == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(mean_bad.support_ok);
    CHECK(mean_bad.size_ok);

    StandardAtom stray = sibling_atom(mp, 1, 1.0, kInf);
    stray.values.values[6] = 0.5; // vertex 6 sits under vertex 2, outside the set
    const AtomCheck support_bad = validate_atom(mp, stray);
    CHECK_FALSE(support_bad.valid);
    CHECK_FALSE(support_bad.support_ok);
    CHECK(support_bad.stray_sup == doctest::Approx(0.5).epsilon(1e-12));

    const AtomCheck p_one = validate_atom(mp, sibling_atom(mp, 1, 1.0, 1.0));
    CHECK_FALSE(p_one.valid);
    CHECK_FALSE(p_one.exponent_ok);
    const AtomCheck p_half = validate_atom(mp, sibling_atom(mp, 1, 1.0, 0.5));
    CHECK_FALSE(p_half.valid);

    // Parameter mismatch between the atom and the ambient measure.
    const MeasureParams other(TreeParams(2), 1.5);
    CHECK_FALSE(validate_atom(other, sibling_atom(mp, 1, 1.0, kInf)).valid);
}

TEST_CASE("point mass splits into a constant atom plus one difference atom") {
    const MeasureParams mp(TreeParams(2), 2.0);
    const TailConstantFunction f = indicator(mp, DyadicSet::singleton(0));
    const AtomicDecomposition dec = atomic_decompose(f);
    REQUIRE(dec.terms.size() == 2);

    CHECK(std::holds_alternative<ConstantAtom>(dec.terms[0].second));
    CHECK(close(dec.terms[0].first, 1.0, 1e-14));

    REQUIRE(std::holds_alternative<StandardAtom>(dec.terms[1].second));
    const StandardAtom& atom = std::get<StandardAtom>(dec.terms[1].second);
    CHECK(close(dec.terms[1].first, 1.5, 1e-13));
    CHECK(atom.set.kind == SetKind::whole);
    CHECK(atom.p == kInf);
    // Root deviation 0.6 scaled by 1/1.5: exactly the reciprocal total mass.
    CHECK(close(evaluate(atom.values, 0), 0.4, 1e-13));
    CHECK(close(evaluate(atom.values, 1), -0.4 / 1.5, 1e-13));
    CHECK(close(evaluate(atom.values, 3), -0.4 / 1.5, 1e-13));
    CHECK(validate_atom(mp, dec.terms[1].second).valid);

    CHECK(h1_norm_upper(f) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("decomposition of flat and zero functions") {
    const MeasureParams mp(TreeParams(3), 1.5);
    CHECK(atomic_decompose(constant_function(mp, 0.0)).terms.empty());
    CHECK(h1_norm_upper(constant_function(mp, 0.0)) == 0.0);

    const Complex c(0.7, -0.2);
    const AtomicDecomposition dec = atomic_decompose(constant_function(mp, c));
    REQUIRE(dec.terms.size() == 1);
    CHECK(std::holds_alternative<ConstantAtom>(dec.terms[0].second));
    CHECK(close(dec.terms[0].first, c * total_mass(mp), 1e-12));
    CHECK(h1_norm_upper(constant_function(mp, c)) ==
          doctest::Approx(std::abs(c) * total_mass(mp)).epsilon(1e-12));
}

TEST_CASE("decompositions rebuild the function from valid atoms") {
    for (unsigned q : {2u, 3u}) {
        for (double alpha : {1.2, 2.0}) {
            const MeasureParams mp(TreeParams(q), alpha);
            for (unsigned n : {0u, 1u, 3u}) {
                const TailConstantFunction f = wavy(mp, n);
                const AtomicDecomposition dec = atomic_decompose(f);

                double coefficient_sum = 0.0;
                TailConstantFunction rebuilt = constant_function(mp, 0.0);
                for (const auto& [coefficient, atom] : dec.terms) {
                    const AtomCheck check = validate_atom(mp, atom);
                    CHECK(check.valid);
                    if (std::holds_alternative<StandardAtom>(atom)) {
                        const StandardAtom& sa = std::get<StandardAtom>(atom);
                        CHECK(sa.p == kInf);
                        // Any valid sup-bounded atom has unit mass at most.
                        CHECK(lp_norm(sa.values, 1.0) <= 1.0 + 1e-9);
                    }
                    rebuilt = add(rebuilt, scale(atom_function(mp, atom), coefficient));
                    coefficient_sum += std::abs(coefficient);
                }

                for (VertexId x = 0; x <= cumulative_count(mp.tree, n + 1); ++x)
                    CHECK(std::abs(evaluate(rebuilt, x) - evaluate(f, x)) < 1e-10);
                CHECK(lp_norm(f, 1.0) <= coefficient_sum + 1e-9);
                CHECK(h1_norm_upper(f) == doctest::Approx(coefficient_sum).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("oscillation norm of a sector indicator") {
    const MeasureParams mp(TreeParams(2), 2.0);
    const TailConstantFunction f = indicator(mp, DyadicSet::sector(1));
    // Oscillation 0.8/2.5 + 0.6/2.5 at the whole space, plus integral 1/2.
    CHECK(bmo_norm(f, 1.0) == doctest::Approx(0.82).epsilon(1e-12));
    CHECK(bmo_norm(f, 1.0) == doctest::Approx(brute_bmo(f, 1.0)).epsilon(1e-9));
}

TEST_CASE("oscillation norm matches the brute series sum") {
    for (unsigned q : {2u, 3u}) {
        for (double alpha : {1.2, 2.0}) {
            const MeasureParams mp(TreeParams(q), alpha);
            const TailConstantFunction f = wavy(mp, 3);
            for (double r : {1.0, 2.0, 3.0})
                CHECK(bmo_norm(f, r) == doctest::Approx(brute_bmo(f, r)).epsilon(1e-9));
        }
    }
}

TEST_CASE("constants have no oscillation") {
    const MeasureParams mp(TreeParams(2), 1.2);
    const Complex c(1.0, -2.0);
    CHECK(bmo_norm(constant_function(mp, c), 1.0) ==
          doctest::Approx(std::abs(c) * total_mass(mp)).epsilon(1e-12));
    CHECK(bmo_norm(constant_function(mp, 0.0), 2.0) == 0.0);
}

TEST_CASE("shifting by a constant moves only the integral part") {
    const MeasureParams mp(TreeParams(3), 2.0);
    const TailConstantFunction f = wavy(mp, 2);
    const Complex c(0.3, 0.9);
    const TailConstantFunction g = add(f, constant_function(mp, c));
    for (double r : {1.0, 2.0}) {
        const double osc_f = bmo_norm(f, r) - std::abs(integral(f));
        const double osc_g = bmo_norm(g, r) - std::abs(integral(g));
        CHECK(osc_f == doctest::Approx(osc_g).epsilon(1e-11));
    }
    CHECK_THROWS_WITH_AS(bmo_norm(f, 0.5), "norm exponent must be at least 1",
                         precondition_error);
}

TEST_CASE("wider oscillation exponents only grow the norm") {
    const MeasureParams mp(TreeParams(2), 2.0);
    for (double r : {2.0, 3.0}) {
        const InboxingReport on_indicator =
            inboxing_check(indicator(mp, DyadicSet::sector(1)), r);
        CHECK(on_indicator.holds);
        CHECK(on_indicator.narrow_norm <= on_indicator.wide_norm + 1e-12);

        const InboxingReport on_wavy = inboxing_check(wavy(mp, 3), r);
        CHECK(on_wavy.holds);
        CHECK(on_wavy.narrow_norm == doctest::Approx(bmo_norm(wavy(mp, 3), 1.0)));
        CHECK(on_wavy.wide_norm == doctest::Approx(bmo_norm(wavy(mp, 3), r)));
    }
    CHECK_THROWS_WITH_AS(inboxing_check(wavy(mp, 1), 1.0), "exponent must exceed 1",
                         precondition_error);
}

TEST_CASE("pairing pins") {
    const MeasureParams mp(TreeParams(2), 2.0);
    const TailConstantFunction f = wavy(mp, 2);

    // Constant functions annihilate mean-zero atoms.
    const Atom sib = sibling_atom(mp, 1, 2.0, kInf);
    CHECK(std::abs(duality_pairing(constant_function(mp, Complex(3.0, 1.0)), sib)) <= 1e-12);

    // The constant atom picks out the average.
    CHECK(close(duality_pairing(f, ConstantAtom{}), integral(f) / total_mass(mp), 1e-12));

    CHECK_THROWS_WITH_AS(duality_pairing(f, sibling_atom(mp, 1, 9.0, kInf)),
                         "not an atom", validation_error);
}

TEST_CASE("pairing against an atom is bounded by the dual oscillation norm") {
    for (unsigned q : {2u, 3u}) {
        const MeasureParams mp(TreeParams(q), 2.0);
        const TailConstantFunction f = wavy(mp, 2);

        // Sup-normed atoms pair against the r = 1 norm.
        for (const auto& [coefficient, atom] : atomic_decompose(wavy(mp, 3)).terms)
            CHECK(std::abs(duality_pairing(f, atom)) <= bmo_norm(f, 1.0) + 1e-9);

        // Square and intermediate exponents pair against their conjugates.
        for (double p : {2.0, 4.0}) {
            const Atom a = sibling_atom(mp, 1, 0.5, p);
            REQUIRE(validate_atom(mp, a).valid);
            CHECK(std::abs(duality_pairing(f, a)) <= bmo_norm(f, p / (p - 1.0)) + 1e-9);
        }
    }
}

} // TEST_SUITE

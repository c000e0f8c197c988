#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "treeharm/kernel.hpp"
#include "treeharm/maximal.hpp"

namespace treeharm {

// Tiny deterministic generator with the same stream on every platform. The
// standard engines are portable but the standard distributions are not, so
// the uniform draws are spelled out here.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    // Uniform in {0, ..., n - 1} for n >= 1.
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Independent uniform values on every vertex down to the boundary.
inline TailConstantFunction random_tail_function(const MeasureParams& mp,
                                                 unsigned boundary, SplitMix64& rng) {
    std::vector<std::complex<double>> vals(cumulative_count(mp.tree, boundary) + 1);
    for (auto& v : vals) {
        const double re = rng.symmetric();
        v = {re, rng.symmetric()};
    }
    return {mp, boundary, std::move(vals)};
}

// Sparse kernel on coordinates down to depth_cap; each pair enters with the
// given probability.
inline FiniteKernel random_kernel(const TreeParams& tp, unsigned depth_cap,
                                  double fill, SplitMix64& rng) {
    std::map<std::pair<VertexId, VertexId>, std::complex<double>> table;
    const VertexId last = cumulative_count(tp, depth_cap);
    for (VertexId z = 0; z <= last; ++z)
        for (VertexId x = 0; x <= last; ++x) {
            if (rng.uniform() >= fill) continue;
            const double re = rng.symmetric();
            table[{z, x}] = {re, rng.symmetric()};
        }
    return {tp, std::move(table)};
}

// A choice of containing set for every vertex down to the boundary, with a
// scattering of unit phases.
inline SelectorPair random_selector(const TreeParams& tp, unsigned boundary,
                                    SplitMix64& rng) {
    SelectorPair sel;
    for (VertexId x = 0; x <= cumulative_count(tp, boundary); ++x) {
        const std::vector<DyadicSet> nests = containing_sets(tp, x);
        sel.choice[x] = nests[rng.below(nests.size())];
        if (rng.below(2) == 0) {
            auto& row = sel.phase[x];
            for (unsigned n = 0; n < 3; ++n) {
                const double angle = 6.283185307179586 * rng.uniform();
                row[rng.below(cumulative_count(tp, boundary) + 1)] =
                    std::complex<double>(std::cos(angle), std::sin(angle));
            }
        }
    }
    return sel;
}

// A valid atom: the constant one now and then, otherwise a mean-zero
// profile on a random set of depth at most 3, scaled strictly inside the
// size bound for a random admissible exponent.
inline Atom random_atom(const MeasureParams& mp, SplitMix64& rng) {
    if (rng.below(5) == 0) return ConstantAtom{};
    const TreeParams& tp = mp.tree;

    const unsigned root_depth = static_cast<unsigned>(rng.below(4));
    DyadicSet d = DyadicSet::whole_space();
    VertexId root = 0;
    if (root_depth > 0) {
        const auto [first, last] = level_range(tp, root_depth);
        root = first + rng.below(last - first + 1);
        d = DyadicSet::sector(root);
    }

    const double exponents[] = {2.0, 4.0, std::numeric_limits<double>::infinity()};
    const double p = exponents[rng.below(3)];

    const unsigned boundary = root_depth + 1;
    std::vector<std::complex<double>> vals(cumulative_count(tp, boundary) + 1, 0.0);
    std::vector<VertexId> slots = children(tp, root);
    slots.push_back(root);
    for (VertexId s : slots) {
        const double re = rng.symmetric();
        vals[s] = {re, rng.symmetric()};
    }
    TailConstantFunction profile(mp, boundary, std::move(vals));

    const std::complex<double> mean = integral_over(profile, d) / set_mass(mp, d);
    for (VertexId s : slots) profile.values[s] -= mean;

    const double norm = lp_norm(profile, p);
    if (norm <= 1e-12) {
        // Degenerate draw: fall back to an exact sibling difference.
        const auto kids = children(tp, root);
        std::fill(profile.values.begin(), profile.values.end(), 0.0);
        profile.values[kids[0]] = 1.0;
        profile.values[kids[1]] = -1.0;
        const double fallback = lp_norm(profile, p);
        const double bound = std::isinf(p) ? 1.0 / set_mass(mp, d)
                                           : std::pow(set_mass(mp, d), 1.0 / p - 1.0);
        return StandardAtom{d, scale(profile, (1.0 - 1e-9) * bound / fallback), p};
    }
    const double bound = std::isinf(p) ? 1.0 / set_mass(mp, d)
                                       : std::pow(set_mass(mp, d), 1.0 / p - 1.0);
    return StandardAtom{d, scale(profile, (1.0 - 1e-9) * bound / norm), p};
}

} // namespace treeharm

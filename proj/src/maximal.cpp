#include "treeharm/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace treeharm {

namespace {

using Complex = std::complex<double>;

DyadicSet nest_slot(VertexId k) {
    return (k == 0) ? DyadicSet::whole_space() : DyadicSet::sector(k);
}

// One value per table index: slot 0 describes the whole space, slot k >= 1
// the subtree at k. Used for both averages and oscillations.
std::vector<double> per_nest_values(const TailConstantFunction& f,
                                    const std::function<double(const DyadicSet&)>& eval) {
    std::vector<double> out(f.values.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = eval(nest_slot(static_cast<VertexId>(k)));
    return out;
}

// Running maximum of per-nest values along root paths.
std::vector<double> path_maximum(const TreeParams& tp, const std::vector<double>& per_nest) {
    std::vector<double> best(per_nest);
    for (std::size_t k = 1; k < best.size(); ++k)
        best[k] = std::max(best[parent(tp, static_cast<VertexId>(k))], per_nest[k]);
    return best;
}

double set_average_of_abs(const TailConstantFunction& abs_f, const DyadicSet& d) {
    return average_on(abs_f, d).real();
}

} // namespace

TailConstantFunction hl_maximal(const TailConstantFunction& f) {
    const TailConstantFunction a = abs_value(f);
    const std::vector<double> avg = per_nest_values(
        f, [&](const DyadicSet& d) { return set_average_of_abs(a, d); });
    const std::vector<double> best = path_maximum(f.params.tree, avg);
    std::vector<Complex> vals(f.values.size());
    for (std::size_t k = 0; k < vals.size(); ++k)
        vals[k] = std::max(std::abs(f.values[k]), best[k]);
    return {f.params, f.boundary_depth, std::move(vals)};
}

TailConstantFunction sharp_maximal(const TailConstantFunction& f) {
    const std::vector<double> osc = per_nest_values(
        f, [&](const DyadicSet& d) { return oscillation(f, d, 1.0); });
    std::vector<double> best = path_maximum(f.params.tree, osc);
    std::vector<Complex> vals(best.size());
    std::copy(best.begin(), best.end(), vals.begin());
    return {f.params, f.boundary_depth, std::move(vals)};
}

void validate_selector(const TreeParams& tp, const SelectorPair& sel) {
    for (const auto& [x, d] : sel.choice)
        if (!dyadic_contains(tp, d, DyadicSet::singleton(x)))
            throw validation_error("selector must choose a containing set");
    for (const auto& [x, row] : sel.phase)
        for (const auto& [y, eta] : row)
            if (std::abs(std::abs(eta) - 1.0) > 1e-12)
                throw validation_error("selector phase must be unimodular");
}

TailConstantFunction s_phi_eta(const TailConstantFunction& f, const SelectorPair& sel) {
    const TreeParams& tp = f.params.tree;
    validate_selector(tp, sel);
    unsigned bound = f.boundary_depth;
    for (const auto& [x, d] : sel.choice) bound = std::max(bound, depth(tp, x));
    std::vector<Complex> vals(cumulative_count(tp, bound) + 1);
    static const std::map<VertexId, Complex> no_phases;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const VertexId x = static_cast<VertexId>(k);
        const auto chosen = sel.choice.find(x);
        if (chosen == sel.choice.end())
            throw precondition_error("selector undefined at x");
        const DyadicSet& d = chosen->second;
        const Complex mean = average_on(f, d);
        const auto row_it = sel.phase.find(x);
        const std::map<VertexId, Complex>& row =
            (row_it == sel.phase.end()) ? no_phases : row_it->second;
        Complex sum = 0.0;
        for_each_piece(f, d, [&](VertexId y, Complex v, double w) {
            const auto eta = row.find(y);
            const Complex twist = (eta == row.end()) ? Complex(1.0) : eta->second;
            sum += (v - mean) * twist * w;
        });
        vals[k] = sum / set_mass(f.params, d);
    }
    return {f.params, bound, std::move(vals)};
}

SelectorPair optimize_selector(const TailConstantFunction& f) {
    const TreeParams& tp = f.params.tree;
    const std::vector<double> osc = per_nest_values(
        f, [&](const DyadicSet& d) { return oscillation(f, d, 1.0); });
    SelectorPair sel;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        const VertexId x = static_cast<VertexId>(k);
        // Containing sets come smallest first; keeping strict improvement
        // picks the smallest set attaining the largest oscillation. The
        // singleton opens the scan with oscillation zero.
        DyadicSet pick = DyadicSet::singleton(x);
        double best = 0.0;
        for (const DyadicSet& d : containing_sets(tp, x)) {
            if (d.kind == SetKind::singleton) continue;
            const double value = osc[(d.kind == SetKind::whole) ? 0 : d.vertex];
            if (value > best) {
                best = value;
                pick = d;
            }
        }
        sel.choice[x] = pick;
        if (pick.kind == SetKind::singleton) continue;
        const Complex mean = average_on(f, pick);
        auto& row = sel.phase[x];
        for_each_piece(f, pick, [&](VertexId y, Complex v, double w) {
            (void)w;
            const Complex dev = v - mean;
            if (std::abs(dev) > 0.0) row[y] = std::conj(dev) / std::abs(dev);
        });
        if (row.empty()) sel.phase.erase(x);
    }
    return sel;
}

Weak11Report weak_11_check(const TailConstantFunction& f,
                           const std::vector<double>& lambda_grid) {
    Weak11Report rep;
    rep.l1_norm = lp_norm(f, 1.0);
    const TailConstantFunction m = hl_maximal(f);
    for (double lambda : lambda_grid) {
        if (!(lambda > 0.0)) throw precondition_error("level must be positive");
        const double mass = level_region(m, lambda).mass;
        const double quotient = (mass == 0.0) ? 0.0 : mass * lambda / rep.l1_norm;
        if (quotient > rep.worst_quotient) {
            rep.worst_quotient = quotient;
            rep.worst_lambda = lambda;
        }
    }
    rep.pass = rep.worst_quotient <= 1.0 + 1e-9;
    return rep;
}

CZOutput cz_decompose(const TailConstantFunction& f, double lambda) {
    const MeasureParams& mp = f.params;
    const TreeParams& tp = mp.tree;
    if (!(lambda > lp_norm(f, 1.0) / total_mass(mp)))
        throw precondition_error("level too small for CZ");

    const TailConstantFunction a = abs_value(f);
    CZOutput out{lambda, {}, Region::empty(), f, {}};

    std::vector<VertexId> untouched_sectors;
    std::vector<VertexId> untouched_singletons;
    std::deque<DyadicSet> work{DyadicSet::whole_space()};
    while (!work.empty()) {
        const DyadicSet d = work.front();
        work.pop_front();
        if (set_average_of_abs(a, d) > lambda) {
            out.stopping.push_back(d);
            continue;
        }
        if (d.kind == SetKind::singleton) {
            untouched_singletons.push_back(d.vertex);
            continue;
        }
        const VertexId root = (d.kind == SetKind::whole) ? 0 : d.vertex;
        if (depth(tp, root) >= f.boundary_depth) {
            // f is constant here and below the level, so nothing deeper can
            // stop: the whole subtree stays untouched.
            untouched_sectors.push_back(root);
            continue;
        }
        for (const DyadicSet& piece : refine(tp, d)) work.push_back(piece);
    }
    out.untouched = region_merged(
        tp, Region::canonical(tp, std::move(untouched_sectors),
                              std::move(untouched_singletons)));

    for (const DyadicSet& d : out.stopping) {
        const Complex mean = average_on(f, d);
        if (d.kind == SetKind::sector) {
            VertexId lo = d.vertex;
            VertexId hi = d.vertex;
            for (unsigned dd = depth(tp, d.vertex); dd <= f.boundary_depth; ++dd) {
                for (VertexId j = lo; j <= hi; ++j) out.good.values[j] = mean;
                lo = (lo == 0) ? 1 : tp.q * lo + 2;
                hi = (hi == 0) ? tp.q + 1 : tp.q * hi + tp.q + 1;
            }
        }
        out.bad_parts.emplace_back(
            d, restrict_to_set(subtract(f, constant_function(mp, mean)), d));
    }
    return out;
}

GoodLambdaReport good_lambda_check(const TailConstantFunction& f, double lambda,
                                   double gamma) {
    if (!(lambda > 0.0)) throw precondition_error("level must be positive");
    if (!(gamma > 0.0)) throw precondition_error("gamma must be positive");
    const MeasureParams& mp = f.params;
    GoodLambdaReport rep;
    rep.lambda = lambda;
    rep.gamma = gamma;
    rep.cprime = MaximalBound{}.weak_11_norm_bound * doubling_constant(mp);

    const TailConstantFunction m = hl_maximal(f);
    const TailConstantFunction sharp = sharp_maximal(f);
    // Same table layout on both sides, so the joint level sets are summed
    // directly: boundary slots carry their subtree weight.
    const VertexId boundary_first =
        (f.boundary_depth == 0) ? 0 : level_range(mp.tree, f.boundary_depth).first;
    for (std::size_t k = 0; k < m.values.size(); ++k) {
        if (!(m.values[k].real() > 2.0 * lambda)) continue;
        const double w = (static_cast<VertexId>(k) >= boundary_first)
                             ? set_mass(mp, nest_slot(static_cast<VertexId>(k)))
                             : point_mass(mp, static_cast<VertexId>(k));
        const double s = sharp.values[k].real();
        if (s < gamma * lambda) rep.lhs_strict_mass += w;
        if (s <= gamma * lambda) rep.lhs_weak_mass += w;
    }
    rep.rhs_mass = rep.cprime * gamma * level_region(m, lambda).mass;
    const double slack = 1e-9 * (1.0 + rep.rhs_mass);
    rep.holds_strict = rep.lhs_strict_mass <= rep.rhs_mass + slack;
    rep.holds_weak = rep.lhs_weak_mass <= rep.rhs_mass + slack;
    return rep;
}

FeffermanSteinReport fefferman_stein_check(const TailConstantFunction& f, double p) {
    if (!(p >= 1.0)) throw precondition_error("norm exponent must be at least 1");
    FeffermanSteinReport rep;
    rep.p = p;
    rep.n_p = std::pow(2.0, (p + 1.0) / p) * std::pow(2.0, p + 1.0) *
              MaximalBound{}.weak_11_norm_bound * doubling_constant(f.params);
    rep.maximal_norm = lp_norm(hl_maximal(f), p);
    rep.function_norm = lp_norm(f, p);
    rep.sharp_norm = lp_norm(sharp_maximal(f), p);
    // A constant function has no oscillation, so the comparison says nothing
    // about it.  The sharp norm of a constant is zero up to rounding in the
    // averages, hence the relative cutoff instead of an exact-zero test.
    if (rep.sharp_norm <= 1e-12 * rep.function_norm) {
        rep.applicable = false;
        return rep;
    }
    const double bound = rep.n_p * rep.sharp_norm * (1.0 + 1e-9);
    rep.maximal_holds = rep.maximal_norm <= bound;
    rep.function_holds = rep.function_norm <= bound;
    return rep;
}

} // namespace treeharm

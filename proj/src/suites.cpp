#include "treeharm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <utility>

namespace treeharm {

namespace {

using nlohmann::json;
using Complex = std::complex<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

// Collects comparisons of the form "margin <= tolerance", keeping the most
// adverse margin and its description.
struct Tracker {
    bool pass = true;
    std::uint64_t checks = 0;
    double worst = -kInf;
    std::string witness;

    void observe(double margin, double tolerance, const std::string& what) {
        ++checks;
        if (margin > worst) {
            worst = margin;
            witness = what;
        }
        if (margin > tolerance) pass = false;
    }
};

SuiteResult finish(const std::string& name, const Tracker& t, json details) {
    SuiteResult result;
    result.suite = name;
    result.pass = t.pass;
    result.checks = t.checks;
    result.worst_margin = (t.checks == 0) ? 0.0 : t.worst;
    result.witness = t.witness;
    result.details = std::move(details);
    return result;
}

SplitMix64 sample_rng(const SuiteConfig& cfg, std::size_t index) {
    return SplitMix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

TailConstantFunction draw_function(const SuiteConfig& cfg, SplitMix64& rng) {
    const unsigned boundary =
        static_cast<unsigned>(rng.below(static_cast<std::uint64_t>(cfg.max_depth) + 1));
    return random_tail_function(cfg.params, boundary, rng);
}

SuiteResult suite_doubling(const SuiteConfig& cfg) {
    const MeasureParams& mp = cfg.params;
    const TreeParams& tp = mp.tree;
    const double q = static_cast<double>(tp.q);
    Tracker t;

    const double tail = 1.0 / (1.0 - std::pow(q, 1.0 - mp.alpha));
    for (unsigned n = 1; n <= std::max(cfg.max_depth, 1u); ++n) {
        const VertexId v = level_range(tp, n).first;
        const VertexId child = children(tp, v).front();

        const double recursion =
            point_mass(mp, v) + q * sector_mass(mp, child) - sector_mass(mp, v);
        t.observe(std::abs(recursion) / sector_mass(mp, v), 1e-12,
                  describe("sector recursion at depth %u", n));

        t.observe(std::abs(sector_mass(mp, v) / point_mass(mp, v) - tail) / tail, 1e-12,
                  describe("sector to point ratio at depth %u", n));
        const double parent_mass = point_mass(mp, parent(tp, v));
        t.observe(std::abs(parent_mass / point_mass(mp, v) - std::pow(q, mp.alpha)) /
                      std::pow(q, mp.alpha),
                  1e-12, describe("parent point ratio at depth %u", n));
        t.observe(std::abs((parent_mass + point_mass(mp, v)) / point_mass(mp, v) -
                           (std::pow(q, mp.alpha) + 1.0)) /
                      (std::pow(q, mp.alpha) + 1.0),
                  1e-12, describe("two point ball ratio at depth %u", n));
    }

    const double closed = (1.0 + std::pow(q, -mp.alpha)) * tail;
    t.observe(std::abs(total_mass(mp) - closed) / closed, 1e-12, "total mass closed form");
    const double assembled =
        point_mass(mp, 0) + (q + 1.0) * sector_mass(mp, level_range(tp, 1).first);
    t.observe(std::abs(total_mass(mp) - assembled) / closed, 1e-12,
              "total mass from depth one sectors");

    const DoublingReport report =
        verify_doubling(mp, cfg.max_depth, doubling_radius_grid(cfg.max_depth, cfg.radius_points));
    t.observe(report.worst_ratio - report.constant, 1e-12 * report.constant,
              describe("ball ratio %.9g over bound %.9g at x=%llu r=%.6g",
                       report.worst_ratio, report.constant,
                       static_cast<unsigned long long>(report.worst_vertex),
                       report.worst_radius));

    json details = {{"doubling_constant", report.constant},
                    {"worst_ratio", report.worst_ratio},
                    {"worst_vertex", report.worst_vertex},
                    {"worst_radius", report.worst_radius},
                    {"pairs_checked", report.checked}};
    return finish("doubling", t, std::move(details));
}

SuiteResult suite_dyadic(const SuiteConfig& cfg) {
    const MeasureParams& mp = cfg.params;
    const TreeParams& tp = mp.tree;
    Tracker t;
    const unsigned top_scale = std::min(cfg.max_depth, 8u);

    const MeasureRatioReport ratio = measure_ratio_check(mp, std::max(top_scale, 1u));
    t.observe(ratio.worst_ratio - ratio.constant, 1e-12 * ratio.constant,
              describe("parent over child mass %.9g over bound %.9g at scale %u",
                       ratio.worst_ratio, ratio.constant, ratio.worst_scale));

    const double total = total_mass(mp);
    for (unsigned m = 0; m <= top_scale; ++m) {
        double sum = 0.0;
        for (const DyadicSet& d : partition_at_scale(tp, m)) sum += set_mass(mp, d);
        t.observe(std::abs(sum - total) / total, 1e-12,
                  describe("partition mass at scale %u", m));
    }

    for (unsigned m = 0; m + 1 <= top_scale; ++m) {
        for (const DyadicSet& d : partition_at_scale(tp, m)) {
            if (d.kind == SetKind::singleton) continue;
            double sum = 0.0;
            for (const DyadicSet& piece : refine(tp, d)) sum += set_mass(mp, piece);
            t.observe(std::abs(sum - set_mass(mp, d)) / total, 1e-12,
                      describe("refinement mass at scale %u", m));
        }
    }

    std::vector<DyadicSet> sets;
    for (unsigned m = 0; m <= std::min(top_scale, 3u); ++m)
        for (const DyadicSet& d : partition_at_scale(tp, m)) sets.push_back(d);
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const bool ok = dyadic_disjoint(tp, sets[i], sets[j]) ||
                            dyadic_contains(tp, sets[i], sets[j]) ||
                            dyadic_contains(tp, sets[j], sets[i]);
            t.observe(ok ? 0.0 : 1.0, 0.5, "nesting law pair");
        }

    json details = {{"ratio_constant", ratio.constant},
                    {"worst_ratio", ratio.worst_ratio},
                    {"top_scale", top_scale}};
    return finish("dyadic", t, std::move(details));
}

SuiteResult suite_weak11(const SuiteConfig& cfg) {
    Tracker t;
    double worst_quotient = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        const double top = lp_norm(hl_maximal(f), kInf);
        if (top == 0.0) continue;
        std::vector<double> grid;
        for (unsigned j = 0; j < 20; ++j)
            grid.push_back(top * 0.02 *
                           std::pow(1.05 / 0.02, static_cast<double>(j) / 19.0));
        const Weak11Report report = weak_11_check(f, grid);
        worst_quotient = std::max(worst_quotient, report.worst_quotient);
        t.observe(report.worst_quotient - 1.0, 0.0,
                  describe("level mass quotient %.12g at lambda %.6g, sample %zu",
                           report.worst_quotient, report.worst_lambda, i));
    }
    json details = {{"worst_quotient", worst_quotient}};
    return finish("weak11", t, std::move(details));
}

SuiteResult suite_czd(const SuiteConfig& cfg) {
    const MeasureParams& mp = cfg.params;
    const TreeParams& tp = mp.tree;
    const double ca = doubling_constant(mp);
    const double total = total_mass(mp);
    Tracker t;

    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        const double l1 = lp_norm(f, 1.0);
        if (l1 == 0.0) continue;

        for (const double mult : cfg.lambda_multipliers) {
            const double lambda = mult * l1 / total;
            const CZOutput out = cz_decompose(f, lambda);

            double stopped_mass = 0.0;
            for (const DyadicSet& d : out.stopping) stopped_mass += set_mass(mp, d);
            t.observe(std::abs(stopped_mass + region_mass(mp, out.untouched) - total) / total,
                      1e-12, describe("partition mass, sample %zu", i));

            for (std::size_t k = 0; k < f.values.size(); ++k)
                if (region_contains(tp, out.untouched, static_cast<VertexId>(k)))
                    t.observe(std::abs(f.values[k]) - lambda, 1e-9 * lambda,
                              describe("bound on the untouched part, sample %zu", i));

            const TailConstantFunction size = abs_value(f);
            for (const DyadicSet& d : out.stopping) {
                const double avg = std::abs(average_on(size, d));
                t.observe(lambda - avg, 0.0,
                          describe("stopping average below level, sample %zu", i));
                t.observe(avg - ca * lambda, 1e-9 * ca * lambda,
                          describe("stopping average cap, sample %zu", i));
            }

            t.observe(stopped_mass - l1 / lambda, 1e-9 * l1 / lambda,
                      describe("stopped mass bound, sample %zu", i));

            const double g2 = std::pow(lp_norm(out.good, 2.0), 2.0);
            t.observe(g2 - (1.0 + ca * ca) * lambda * l1,
                      1e-9 * (1.0 + ca * ca) * lambda * l1,
                      describe("square norm of the flattened part, sample %zu", i));

            double bad_sum = 0.0;
            TailConstantFunction rebuilt = out.good;
            for (const auto& [d, b] : out.bad_parts) {
                bad_sum += lp_norm(b, 1.0);
                t.observe(std::abs(integral(b)), 1e-12,
                          describe("mean-zero remainder, sample %zu", i));
                rebuilt = add(rebuilt, b);
            }
            t.observe(bad_sum - (1.0 + ca) * l1, 1e-9 * (1.0 + ca) * l1,
                      describe("remainder mass bound, sample %zu", i));

            double gap = 0.0;
            for (VertexId x = 0; x <= cumulative_count(tp, f.boundary_depth + 1); ++x)
                gap = std::max(gap, std::abs(evaluate(rebuilt, x) - evaluate(f, x)));
            t.observe(gap, 1e-10, describe("reassembly gap, sample %zu", i));
        }
    }
    json details = {{"lambda_multipliers", cfg.lambda_multipliers}};
    return finish("czd", t, std::move(details));
}

SuiteResult suite_goodlambda(const SuiteConfig& cfg) {
    const double total = total_mass(cfg.params);
    Tracker t;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        const double l1 = lp_norm(f, 1.0);
        if (l1 == 0.0) continue;
        for (const double mult : cfg.lambda_multipliers) {
            const double lambda = mult * l1 / total;
            for (const double gamma : cfg.gammas) {
                const GoodLambdaReport report = good_lambda_check(f, lambda, gamma);
                t.observe(report.lhs_strict_mass - report.rhs_mass,
                          1e-9 * (1.0 + report.rhs_mass),
                          describe("joint level mass %.9g over %.9g, sample %zu",
                                   report.lhs_strict_mass, report.rhs_mass, i));
            }
        }
    }
    json details = {{"cprime", doubling_constant(cfg.params)}};
    return finish("goodlambda", t, std::move(details));
}

SuiteResult suite_feffermanstein(const SuiteConfig& cfg) {
    Tracker t;
    std::uint64_t skipped = 0;
    double worst_quotient = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        for (const double p : cfg.exponents) {
            const FeffermanSteinReport report = fefferman_stein_check(f, p);
            if (!report.applicable) {
                ++skipped;
                continue;
            }
            const double rhs = report.n_p * report.sharp_norm;
            worst_quotient = std::max(worst_quotient, report.function_norm / rhs);
            t.observe(report.maximal_norm - rhs, 1e-9 * rhs,
                      describe("maximal norm at p=%.3g, sample %zu", p, i));
            t.observe(report.function_norm - rhs, 1e-9 * rhs,
                      describe("function norm at p=%.3g, sample %zu", p, i));
        }
    }
    json details = {{"skipped_constant_samples", skipped},
                    {"worst_quotient_of_bound", worst_quotient}};
    return finish("feffermanstein", t, std::move(details));
}

SuiteResult suite_inboxing(const SuiteConfig& cfg) {
    Tracker t;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        for (const double r : cfg.oscillation_exponents) {
            const InboxingReport report = inboxing_check(f, r);
            t.observe(report.narrow_norm - report.wide_norm,
                      1e-9 * report.wide_norm + 1e-15,
                      describe("oscillation norms at r=%.3g, sample %zu", r, i));
        }
    }
    return finish("inboxing", t, json::object());
}

SuiteResult suite_duality(const SuiteConfig& cfg) {
    const MeasureParams& mp = cfg.params;
    Tracker t;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        const Atom atom = random_atom(mp, rng);
        double dual = 1.0;
        if (std::holds_alternative<StandardAtom>(atom)) {
            const double p = std::get<StandardAtom>(atom).p;
            dual = std::isinf(p) ? 1.0 : p / (p - 1.0);
        }
        const double pairing = std::abs(duality_pairing(f, atom));
        const double bound = bmo_norm(f, dual);
        t.observe(pairing - bound, 1e-9,
                  describe("pairing %.9g over oscillation bound %.9g, sample %zu",
                           pairing, bound, i));
    }
    return finish("duality", t, json::object());
}

SuiteResult suite_sups(const SuiteConfig& cfg) {
    const TreeParams& tp = cfg.params.tree;
    Tracker t;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        SplitMix64 rng = sample_rng(cfg, i);
        const TailConstantFunction f = draw_function(cfg, rng);
        const TailConstantFunction sharp = sharp_maximal(f);

        const SelectorPair sel = random_selector(tp, f.boundary_depth, rng);
        const TailConstantFunction twisted = s_phi_eta(f, sel);
        for (std::size_t k = 0; k < twisted.values.size(); ++k)
            t.observe(std::abs(twisted.values[k]) - std::abs(sharp.values[k]), 1e-12,
                      describe("twisted average dominated at vertex %zu, sample %zu", k, i));

        const TailConstantFunction best = s_phi_eta(f, optimize_selector(f));
        for (std::size_t k = 0; k < best.values.size(); ++k)
            t.observe(std::abs(best.values[k] - sharp.values[k]), 1e-10,
                      describe("optimizer gap at vertex %zu, sample %zu", k, i));
    }
    return finish("supS", t, json::object());
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "doubling", "dyadic",  "weak11",   "czd",  "goodlambda",
        "feffermanstein", "inboxing", "duality", "supS"};
    return names;
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "doubling") return suite_doubling(cfg);
    if (name == "dyadic") return suite_dyadic(cfg);
    if (name == "weak11") return suite_weak11(cfg);
    if (name == "czd") return suite_czd(cfg);
    if (name == "goodlambda") return suite_goodlambda(cfg);
    if (name == "feffermanstein") return suite_feffermanstein(cfg);
    if (name == "inboxing") return suite_inboxing(cfg);
    if (name == "duality") return suite_duality(cfg);
    if (name == "supS") return suite_sups(cfg);
    throw validation_error("unknown suite");
}

json suite_report(const SuiteResult& result, const SuiteConfig& cfg) {
    return {{"suite", result.suite},
            {"pass", result.pass},
            {"checks", result.checks},
            {"worst_margin", result.worst_margin},
            {"witness", result.witness},
            {"details", result.details},
            {"config",
             {{"q", cfg.params.tree.q},
              {"alpha", cfg.params.alpha},
              {"max_depth", cfg.max_depth},
              {"seed", cfg.seed},
              {"samples", cfg.samples},
              {"lambda_multipliers", cfg.lambda_multipliers},
              {"gammas", cfg.gammas},
              {"exponents", cfg.exponents},
              {"oscillation_exponents", cfg.oscillation_exponents},
              {"radius_points", cfg.radius_points}}}};
}

} // namespace treeharm

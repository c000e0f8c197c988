// treeharm: exact measure, maximal function, and kernel arithmetic on
// homogeneous trees, with JSON in and out.
//
// Exit codes: 0 success, 1 usage, 2 verification found violations,
// 3 malformed JSON, 4 invalid input values, 5 operation preconditions.
#include "CLI11.hpp"

#include "treeharm/json_io.hpp"
#include "treeharm/suites.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace treeharm;
using nlohmann::json;

struct Options {
    unsigned q = 2;
    double alpha = 2.0;
    unsigned max_depth = 4;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::string input = "-";
    std::string output = "-";
    bool no_timestamp = false;
};

std::string read_source(const std::string& path) {
    std::ostringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw validation_error("cannot read " + path);
        buf << in.rdbuf();
    }
    return buf.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write " + path);
    out << text;
}

void emit_json(const Options& opt, const json& value) {
    emit(opt.output, value.dump(2) + "\n");
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

TailConstantFunction read_function(const Options& opt, const std::string& path) {
    return function_from_json(json::parse(read_source(path.empty() ? opt.input : path)));
}

FiniteKernel read_kernel(const Options& opt, const std::string& path = {}) {
    const TreeParams tp(opt.q);
    return kernel_from_json(tp, json::parse(read_source(path.empty() ? opt.input : path)));
}

SuiteConfig suite_config(const Options& opt) {
    SuiteConfig cfg{MeasureParams(TreeParams(opt.q), opt.alpha)};
    cfg.max_depth = opt.max_depth;
    cfg.seed = opt.seed;
    cfg.samples = opt.samples;
    return cfg;
}

int run_info(const Options& opt) {
    const MeasureParams mp(TreeParams(opt.q), opt.alpha);
    json levels = json::array();
    for (unsigned m = 0; m <= opt.max_depth; ++m)
        levels.push_back(cumulative_count(mp.tree, m));
    emit_json(opt, {{"q", opt.q},
                    {"alpha", opt.alpha},
                    {"max_depth", opt.max_depth},
                    {"total_mass", total_mass(mp)},
                    {"doubling_constant", doubling_constant(mp)},
                    {"cumulative_counts", levels}});
    return 0;
}

int run_cz(const Options& opt, double lambda) {
    emit_json(opt, cz_to_json(cz_decompose(read_function(opt, {}), lambda)));
    return 0;
}

int run_maximal(const Options& opt, bool sharp) {
    const TailConstantFunction f = read_function(opt, {});
    emit_json(opt, function_to_json(sharp ? sharp_maximal(f) : hl_maximal(f)));
    return 0;
}

int run_bmo(const Options& opt, double r) {
    const TailConstantFunction f = read_function(opt, {});
    emit_json(opt, {{"r", r}, {"bmo_norm", bmo_norm(f, r)}});
    return 0;
}

int run_atoms(const Options& opt) {
    const TailConstantFunction f = read_function(opt, {});
    emit_json(opt, {{"decomposition", decomposition_to_json(atomic_decompose(f))},
                    {"h1_norm_upper", h1_norm_upper(f)}});
    return 0;
}

int run_pairing(const Options& opt, const std::string& atom_path) {
    const TailConstantFunction f = read_function(opt, {});
    const Atom atom = atom_from_json(json::parse(read_source(atom_path)));
    const auto value = duality_pairing(f, atom);
    emit_json(opt, {{"re", value.real()},
                    {"im", value.imag()},
                    {"modulus", std::abs(value)}});
    return 0;
}

int run_hormander(const Options& opt) {
    const MeasureParams mp(TreeParams(opt.q), opt.alpha);
    const FiniteKernel k = read_kernel(opt);
    emit_json(opt, {{"hormander_constant", hormander_constant(mp, k)},
                    {"depth_bound", k.depth_bound}});
    return 0;
}

int run_apply(const Options& opt, const std::string& kernel_path) {
    const MeasureParams mp(TreeParams(opt.q), opt.alpha);
    const FiniteKernel k = read_kernel(opt, kernel_path);
    emit_json(opt, function_to_json(apply_operator(mp, k, read_function(opt, {}))));
    return 0;
}

int run_opnorm(const Options& opt, double tol) {
    const MeasureParams mp(TreeParams(opt.q), opt.alpha);
    const OperatorNormEstimate est = l2_operator_norm(mp, read_kernel(opt), tol);
    emit_json(opt, {{"value", est.value},
                    {"iterations", est.iterations},
                    {"converged", est.converged}});
    return 0;
}

int run_probe(const Options& opt) {
    const MeasureParams mp(TreeParams(opt.q), opt.alpha);
    const FiniteKernel k = read_kernel(opt);
    SplitMix64 rng(opt.seed);
    std::vector<Atom> atoms;
    std::vector<TailConstantFunction> functions;
    for (std::size_t i = 0; i < opt.samples; ++i) {
        atoms.push_back(random_atom(mp, rng));
        const auto boundary = static_cast<unsigned>(rng.below(opt.max_depth + 1));
        functions.push_back(random_tail_function(mp, boundary, rng));
    }
    const H1ProbeReport h1 = h1_l1_probe(mp, k, atoms);
    const LpSweepReport lp = lp_ratio_sweep(mp, k, {1.5, 2.0, 4.0}, functions);
    json rows = json::array();
    for (const LpRatioRow& row : lp.rows)
        rows.push_back({{"p", row.p},
                        {"worst_ratio", row.worst_ratio},
                        {"worst_index", row.worst_index}});
    json out = {{"config",
                 {{"q", opt.q},
                  {"alpha", opt.alpha},
                  {"max_depth", opt.max_depth},
                  {"seed", opt.seed},
                  {"samples", opt.samples}}},
                {"h1_probe",
                 {{"samples", h1.samples},
                  {"worst_output_norm", h1.worst_output_norm},
                  {"worst_index", h1.worst_index},
                  {"reference_bound", h1.reference_bound},
                  {"within_reference", h1.within_reference}}},
                {"lp_sweep",
                 {{"rows", rows},
                  {"l2_norm", lp.l2_norm},
                  {"reference_bound", lp.reference_bound},
                  {"within_reference", lp.within_reference}}}};
    if (!opt.no_timestamp) out["timestamp"] = timestamp();
    emit_json(opt, out);
    return 0;
}

int run_verify(const Options& opt, const std::string& suite) {
    const SuiteConfig cfg = suite_config(opt);
    const SuiteResult result = run_suite(suite, cfg);
    json report = suite_report(result, cfg);
    if (!opt.no_timestamp) report["timestamp"] = timestamp();
    emit_json(opt, report);
    return result.pass ? 0 : 2;
}

int run_sweep(const Options& opt, const std::string& only_suite) {
    std::string csv;
    if (!opt.no_timestamp) csv += "# treeharm sweep " + timestamp() + "\n";
    csv += "q,alpha,suite,pass,checks,worst_margin\n";
    for (const unsigned q : {2u, 3u})
        for (const double alpha : {1.2, 1.5, 2.0, 3.0}) {
            SuiteConfig cfg{MeasureParams(TreeParams(q), alpha)};
            cfg.max_depth = opt.max_depth;
            cfg.seed = opt.seed;
            cfg.samples = opt.samples;
            for (const std::string& suite : suite_names()) {
                if (!only_suite.empty() && suite != only_suite) continue;
                const SuiteResult r = run_suite(suite, cfg);
                char row[160];
                std::snprintf(row, sizeof row, "%u,%.12g,%s,%d,%llu,%.12g\n", q,
                              alpha, r.suite.c_str(), r.pass ? 1 : 0,
                              (unsigned long long)r.checks, r.worst_margin);
                csv += row;
            }
        }
    emit(opt.output, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"exact measure, maximal function, and kernel arithmetic on "
                 "homogeneous trees"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    app.footer("exit codes: 0 ok, 1 usage, 2 verification violations, 3 malformed "
               "json, 4 invalid values, 5 preconditions\n"
               "sweep CSV columns: q,alpha,suite,pass,checks,worst_margin");

    app.add_option("--q", opt.q, "branching factor, at least 2")
        ->envname("TREEHARM_Q");
    app.add_option("--alpha", opt.alpha, "measure exponent, above 1")
        ->envname("TREEHARM_ALPHA");
    app.add_option("--max-depth", opt.max_depth, "depth for tables and samples")
        ->check(CLI::Range(0u, 12u))
        ->envname("TREEHARM_MAX_DEPTH");
    app.add_option("--seed", opt.seed, "root seed for randomized runs")
        ->envname("TREEHARM_SEED");
    app.add_option("--samples", opt.samples, "sample count for randomized runs")
        ->envname("TREEHARM_SAMPLES");
    app.add_option("--input", opt.input, "input JSON path, - for stdin")
        ->envname("TREEHARM_INPUT");
    app.add_option("--output", opt.output, "output path, - for stdout")
        ->envname("TREEHARM_OUTPUT");
    app.add_flag("--no-timestamp", opt.no_timestamp,
                 "omit the timestamp field from reports")
        ->envname("TREEHARM_NO_TIMESTAMP");

    auto* info = app.add_subcommand("info", "space constants and level table");

    double lambda = 0.0;
    auto* cz = app.add_subcommand("cz", "stopping-time decomposition of a function");
    cz->add_option("--lambda", lambda, "decomposition level")->required();

    auto* maximal = app.add_subcommand("maximal", "averaged maximal function");
    auto* sharp = app.add_subcommand("sharp", "oscillation maximal function");

    double r = 1.0;
    auto* bmo = app.add_subcommand("bmo", "oscillation norm of a function");
    bmo->add_option("--r", r, "oscillation exponent, at least 1");

    auto* atoms = app.add_subcommand("atoms", "atomic decomposition of a function");

    std::string atom_path;
    auto* pairing = app.add_subcommand("pairing", "integral of a function against an atom");
    pairing->add_option("--atom", atom_path, "atom JSON path")->required();

    auto* hormander = app.add_subcommand("hormander", "column-difference tail constant of a kernel");

    std::string kernel_path;
    auto* apply = app.add_subcommand("apply", "apply a kernel to a function");
    apply->add_option("--kernel", kernel_path, "kernel JSON path")->required();

    double tol = 1e-10;
    auto* opnorm = app.add_subcommand("opnorm", "operator norm of a kernel by power iteration");
    opnorm->add_option("--tol", tol, "relative convergence tolerance");

    auto* probe = app.add_subcommand("probe", "randomized norm probes of a kernel");

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run one verification suite");
    verify->add_option("--suite", suite, "one of: doubling, dyadic, weak11, czd, "
                       "goodlambda, feffermanstein, inboxing, duality, supS")
        ->required();

    std::string sweep_suite;
    auto* sweep = app.add_subcommand("sweep", "CSV of every suite over the parameter grid");
    sweep->add_option("--suite", sweep_suite, "restrict to one suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*info) return run_info(opt);
        if (*cz) return run_cz(opt, lambda);
        if (*maximal) return run_maximal(opt, false);
        if (*sharp) return run_maximal(opt, true);
        if (*bmo) return run_bmo(opt, r);
        if (*atoms) return run_atoms(opt);
        if (*pairing) return run_pairing(opt, atom_path);
        if (*hormander) return run_hormander(opt);
        if (*apply) return run_apply(opt, kernel_path);
        if (*opnorm) return run_opnorm(opt, tol);
        if (*probe) return run_probe(opt);
        if (*verify) return run_verify(opt, suite);
        if (*sweep) return run_sweep(opt, sweep_suite);
    } catch (const json::parse_error& e) {
        std::fprintf(stderr, "malformed json: %s\n", e.what());
        return 3;
    } catch (const precondition_error& e) {
        std::fprintf(stderr, "precondition failed: %s\n", e.what());
        return 5;
    } catch (const validation_error& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return 4;
    }
    return 1;
}

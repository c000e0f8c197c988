#pragma once

#include <map>
#include <utility>
#include <vector>

#include "treeharm/function.hpp"

namespace treeharm {

// The weak (1,1) operator bound of the maximal operator. It enters the
// good-lambda and Fefferman-Stein constants.
struct MaximalBound {
    double weak_11_norm_bound = 1.0;
};

// Mf(x): the largest average of |f| over the nested sets containing x.
// Tail-constant in, tail-constant out at the same boundary depth.
TailConstantFunction hl_maximal(const TailConstantFunction& f);

// The largest mean oscillation of f over the nested sets containing x.
TailConstantFunction sharp_maximal(const TailConstantFunction& f);

// A choice of containing set per vertex together with unit phases on the
// pairs (evaluation vertex, piece root). Phases missing from the table
// default to 1; a phase keyed by a boundary vertex applies to its whole
// subtree piece.
struct SelectorPair {
    std::map<VertexId, DyadicSet> choice;
    std::map<VertexId, std::map<VertexId, std::complex<double>>> phase;
};

void validate_selector(const TreeParams& tp, const SelectorPair& sel);

// S f(x) = average over the chosen set of (f - mean) twisted by the phases.
// The choice table must cover every vertex up to the output boundary, which
// sits at the deeper of the function boundary and the deepest choice.
TailConstantFunction s_phi_eta(const TailConstantFunction& f, const SelectorPair& sel);

// The selector that turns the twisted average into the mean oscillation of
// the largest-oscillation containing set: the smallest such set is chosen
// and each phase unwinds its piece's deviation. Applying s_phi_eta to it
// reproduces sharp_maximal exactly.
SelectorPair optimize_selector(const TailConstantFunction& f);

struct Weak11Report {
    double l1_norm = 0.0;
    double worst_quotient = 0.0; // mass({Mf > lambda}) divided by l1/lambda
    double worst_lambda = 0.0;
    bool pass = true;
};

Weak11Report weak_11_check(const TailConstantFunction& f,
                           const std::vector<double>& lambda_grid);

struct CZOutput {
    double lambda = 0.0;
    std::vector<DyadicSet> stopping;                                   // Q
    Region untouched;                                                  // F
    TailConstantFunction good;                                         // g
    std::vector<std::pair<DyadicSet, TailConstantFunction>> bad_parts; // b_Q
};

// Stopping-time splitting of f at level lambda: descend through the layers,
// stop on sets where the average of |f| first exceeds lambda, leave the rest
// untouched. g replaces f by its average on each stopping set; each bad part
// carries the mean-zero remainder on one stopping set.
CZOutput cz_decompose(const TailConstantFunction& f, double lambda);

struct GoodLambdaReport {
    double lambda = 0.0;
    double gamma = 0.0;
    double cprime = 0.0;          // weak (1,1) bound times the doubling constant
    double lhs_strict_mass = 0.0; // {Mf > 2 lambda, sharp < gamma lambda}
    double lhs_weak_mass = 0.0;   // same with sharp <= gamma lambda
    double rhs_mass = 0.0;        // cprime * gamma * mass({Mf > lambda})
    bool holds_strict = true;
    bool holds_weak = true;
};

GoodLambdaReport good_lambda_check(const TailConstantFunction& f, double lambda,
                                   double gamma);

struct FeffermanSteinReport {
    double p = 0.0;
    double n_p = 0.0; // 2^((p+1)/p) * 2^(p+1) * weak bound * doubling constant
    double maximal_norm = 0.0;
    double function_norm = 0.0;
    double sharp_norm = 0.0;
    bool applicable = true; // false when f is constant, so the sharp norm is 0
    bool maximal_holds = true;
    bool function_holds = true;
};

FeffermanSteinReport fefferman_stein_check(const TailConstantFunction& f, double p);

} // namespace treeharm

#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "treeharm/hardy.hpp"

namespace treeharm {

// A finitely supported kernel on vertex pairs (z, x): row index first.
// Exact zeros are dropped at construction, so two kernels are equal exactly
// when their entry maps are, and the depth bound covers every coordinate.
struct FiniteKernel {
    TreeParams tree;
    std::map<std::pair<VertexId, VertexId>, std::complex<double>> entries;
    unsigned depth_bound = 0;

    FiniteKernel(const TreeParams& tp,
                 std::map<std::pair<VertexId, VertexId>, std::complex<double>> table);
};

// K(z, x), zero outside the stored entries.
std::complex<double> evaluate_kernel(const FiniteKernel& k, VertexId z, VertexId x);

// Entry-wise transpose-conjugate; applying it twice gives the kernel back.
FiniteKernel adjoint(const FiniteKernel& k);

// (K f)(z) = sum over x of K(z, x) f(x) mu(x): one weighted row sum per
// output vertex. Rows vanish below the depth bound, so the output carries a
// zero tail one level under it.
TailConstantFunction apply_operator(const MeasureParams& mp, const FiniteKernel& k,
                                    const TailConstantFunction& f);

// Largest mu-weighted distance between two kernel columns rooted in a common
// sector, summed outside that sector:
//   sup over v != o, x and y under v, of  sum_{z not under v} |K(z,x) - K(z,y)| mu(z).
// Columns without entries are all equal, so one representative of them per
// sector stands in for the rest and the supremum is a finite scan.
double hormander_constant(const MeasureParams& mp, const FiniteKernel& k);

struct OperatorNormEstimate {
    double value = 0.0;
    unsigned iterations = 0;
    bool converged = true;
};

// Largest singular value of the mass-symmetrized matrix
// A(z, x) = mu(z)^{1/2} K(z, x) mu(x)^{1/2}, by power iteration on A*A from
// the normalized all-ones vector, at most 10000 rounds. A kernel acting on
// square-summable functions against mu has exactly this operator norm.
OperatorNormEstimate l2_operator_norm(const MeasureParams& mp, const FiniteKernel& k,
                                      double tol = 1e-10);

struct H1ProbeReport {
    std::size_t samples = 0;
    double worst_output_norm = 0.0; // largest 1-norm of the operator on an atom
    std::size_t worst_index = 0;
    double reference_bound = 0.0;   // factor * (operator norm + column distance sup)
    bool within_reference = true;   // empirical observation, not a certificate
};

// Applies the operator to each atom and records the largest output 1-norm.
// The reference line scales with the operator norm and the column-distance
// supremum; the comparison is informational only.
H1ProbeReport h1_l1_probe(const MeasureParams& mp, const FiniteKernel& k,
                          const std::vector<Atom>& atoms,
                          double reference_factor = 1.0);

struct LpRatioRow {
    double p = 0.0;
    double worst_ratio = 0.0;
    std::size_t worst_index = 0;
};

struct LpSweepReport {
    std::vector<LpRatioRow> rows;
    double l2_norm = 0.0;
    double reference_bound = 0.0; // max of the operator norm and the given cap
    bool within_reference = true; // empirical observation, not a certificate
};

// Empirical p-norm quotients of the operator over the sample functions, one
// row per exponent. Zero-norm samples are skipped. The reference comparison
// allows the given multiplicative slack and is informational only.
LpSweepReport lp_ratio_sweep(const MeasureParams& mp, const FiniteKernel& k,
                             const std::vector<double>& p_list,
                             const std::vector<TailConstantFunction>& samples,
                             double reference_cap = 0.0, double slack = 0.5);

} // namespace treeharm

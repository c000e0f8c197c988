#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "treeharm/dyadic.hpp"
#include "treeharm/measure.hpp"

namespace treeharm {

// A function on the tree that is eventually radial in each direction: values
// are stored densely for every vertex of depth at most boundary_depth, and on
// each subtree hanging from a boundary vertex the function keeps that
// vertex's value. All integrals against the weight are therefore exact,
// with geometric tails summed in closed form. boundary_depth 0 is a constant.
struct TailConstantFunction {
    MeasureParams params;
    unsigned boundary_depth = 0;
    std::vector<std::complex<double>> values;

    TailConstantFunction(MeasureParams mp, unsigned depth_bound,
                         std::vector<std::complex<double>> vals);
};

TailConstantFunction constant_function(const MeasureParams& mp, std::complex<double> c);
TailConstantFunction indicator(const MeasureParams& mp, const DyadicSet& d);

std::complex<double> evaluate(const TailConstantFunction& f, VertexId x);

// Re-expresses f with a deeper value table. The function is unchanged.
TailConstantFunction push_boundary_down(const TailConstantFunction& f, unsigned depth_bound);

TailConstantFunction add(const TailConstantFunction& f, const TailConstantFunction& g);
TailConstantFunction subtract(const TailConstantFunction& f, const TailConstantFunction& g);
TailConstantFunction multiply(const TailConstantFunction& f, const TailConstantFunction& g);
TailConstantFunction scale(const TailConstantFunction& f, std::complex<double> c);
TailConstantFunction abs_value(const TailConstantFunction& f);
TailConstantFunction conjugate(const TailConstantFunction& f);

// f clipped to a piece or a region: unchanged inside, zero outside.
TailConstantFunction restrict_to_set(const TailConstantFunction& f, const DyadicSet& d);
TailConstantFunction restrict_to_region(const TailConstantFunction& f, const Region& r);

std::complex<double> integral(const TailConstantFunction& f);
std::complex<double> integral_over(const TailConstantFunction& f, const DyadicSet& d);
std::complex<double> average_on(const TailConstantFunction& f, const DyadicSet& d);

// For finite p the usual weighted p-th mean; infinity gives the sup of the
// moduli, which the value table attains.
double lp_norm(const TailConstantFunction& f, double p);

struct LevelReport {
    Region region;
    double mass = 0.0;
};

// Where the function exceeds the threshold. Only defined for real values;
// run it on abs_value(f) otherwise.
LevelReport level_region(const TailConstantFunction& f, double threshold);

// Where a predicate on the (real) value holds, as a merged region. The same
// real-valuedness rule as level_region applies.
Region region_where(const TailConstantFunction& f,
                    const std::function<bool(double)>& pred);

// The mean oscillation exponent r about the average on d:
// (average over d of |f - f_d|^r)^(1/r).
double oscillation(const TailConstantFunction& f, const DyadicSet& d, double r);

// Walks the constant pieces of f inside d, reporting each piece's root
// vertex, value, and weight. A piece is either a single vertex above the
// boundary or a whole subtree hanging from it. Integration, averages, norms,
// and oscillations all ride on this.
void for_each_piece(const TailConstantFunction& f, const DyadicSet& d,
                    const std::function<void(VertexId, std::complex<double>, double)>& emit);

} // namespace treeharm

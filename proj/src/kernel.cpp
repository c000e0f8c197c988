#include "treeharm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace treeharm {

namespace {

using Complex = std::complex<double>;
using Entry = std::pair<std::pair<VertexId, VertexId>, Complex>;

void require_tree_match(const TreeParams& a, const TreeParams& b) {
    if (a.q != b.q) throw validation_error("kernel parameters differ");
}

bool under_sector(const TreeParams& tp, VertexId v, VertexId x) {
    for (VertexId a = x;; a = parent(tp, a)) {
        if (a == v) return true;
        if (a == 0) return false;
    }
}

// Per-column row lists, keyed by the column vertex.
std::map<VertexId, std::vector<std::pair<VertexId, Complex>>>
columns_of(const FiniteKernel& k) {
    std::map<VertexId, std::vector<std::pair<VertexId, Complex>>> columns;
    for (const auto& [zx, value] : k.entries)
        columns[zx.second].emplace_back(zx.first, value);
    return columns;
}

} // namespace

FiniteKernel::FiniteKernel(const TreeParams& tp,
                           std::map<std::pair<VertexId, VertexId>, Complex> table)
    : tree(tp) {
    for (auto& [zx, value] : table) {
        if (value == Complex(0.0)) continue;
        depth_bound = std::max({depth_bound, depth(tree, zx.first), depth(tree, zx.second)});
        entries.emplace(zx, value);
    }
}

Complex evaluate_kernel(const FiniteKernel& k, VertexId z, VertexId x) {
    const auto it = k.entries.find({z, x});
    return (it == k.entries.end()) ? Complex(0.0) : it->second;
}

FiniteKernel adjoint(const FiniteKernel& k) {
    std::map<std::pair<VertexId, VertexId>, Complex> flipped;
    for (const auto& [zx, value] : k.entries)
        flipped.emplace(std::make_pair(zx.second, zx.first), std::conj(value));
    return {k.tree, std::move(flipped)};
}

TailConstantFunction apply_operator(const MeasureParams& mp, const FiniteKernel& k,
                                    const TailConstantFunction& f) {
    require_tree_match(mp.tree, k.tree);
    if (f.params.tree.q != mp.tree.q || f.params.alpha != mp.alpha)
        throw validation_error("function parameters differ");
    const unsigned bound = k.depth_bound + 1;
    std::vector<Complex> vals(cumulative_count(mp.tree, bound) + 1, 0.0);
    for (const auto& [zx, value] : k.entries)
        vals[zx.first] += value * evaluate(f, zx.second) * point_mass(mp, zx.second);
    return {mp, bound, std::move(vals)};
}

double hormander_constant(const MeasureParams& mp, const FiniteKernel& k) {
    require_tree_match(mp.tree, k.tree);
    const TreeParams& tp = k.tree;
    const auto columns = columns_of(k);

    // Weighted column distance summed outside the sector at v.
    const auto pair_sum = [&](VertexId v, const std::vector<std::pair<VertexId, Complex>>* cx,
                              const std::vector<std::pair<VertexId, Complex>>* cy) {
        std::map<VertexId, Complex> difference;
        if (cx)
            for (const auto& [z, value] : *cx) difference[z] += value;
        if (cy)
            for (const auto& [z, value] : *cy) difference[z] -= value;
        double sum = 0.0;
        for (const auto& [z, value] : difference)
            if (!under_sector(tp, v, z)) sum += std::abs(value) * point_mass(mp, z);
        return sum;
    };

    double sup = 0.0;
    const VertexId last = cumulative_count(tp, k.depth_bound + 1);
    for (VertexId v = 1; v <= last; ++v) {
        std::vector<VertexId> rooted;
        for (const auto& [x, rows] : columns)
            if (under_sector(tp, v, x)) rooted.push_back(x);
        if (rooted.empty()) continue;

        // Leftmost descent reaches an entry-free column within the sector:
        // nothing lives below the depth bound.
        VertexId rep = v;
        while (columns.count(rep)) rep = children(tp, rep).front();

        std::vector<const std::vector<std::pair<VertexId, Complex>>*> picks;
        for (VertexId x : rooted) picks.push_back(&columns.at(x));
        picks.push_back(nullptr);
        for (std::size_t i = 0; i < picks.size(); ++i)
            for (std::size_t j = i + 1; j < picks.size(); ++j)
                sup = std::max(sup, pair_sum(v, picks[i], picks[j]));
    }
    return sup;
}

OperatorNormEstimate l2_operator_norm(const MeasureParams& mp, const FiniteKernel& k,
                                      double tol) {
    require_tree_match(mp.tree, k.tree);
    if (!(tol > 0.0)) throw precondition_error("tolerance must be positive");
    OperatorNormEstimate out;
    if (k.entries.empty()) return out;

    std::vector<VertexId> rows, cols;
    for (const auto& [zx, value] : k.entries) {
        rows.push_back(zx.first);
        cols.push_back(zx.second);
    }
    const auto dedupe = [](std::vector<VertexId>& ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    };
    dedupe(rows);
    dedupe(cols);
    std::unordered_map<VertexId, std::size_t> row_ix, col_ix;
    for (std::size_t i = 0; i < rows.size(); ++i) row_ix[rows[i]] = i;
    for (std::size_t i = 0; i < cols.size(); ++i) col_ix[cols[i]] = i;

    struct Weighted {
        std::size_t row;
        std::size_t col;
        Complex a;
    };
    std::vector<Weighted> matrix;
    matrix.reserve(k.entries.size());
    for (const auto& [zx, value] : k.entries)
        matrix.push_back({row_ix.at(zx.first), col_ix.at(zx.second),
                          value * std::sqrt(point_mass(mp, zx.first)) *
                              std::sqrt(point_mass(mp, zx.second))});

    std::vector<Complex> v(cols.size(), 1.0 / std::sqrt(static_cast<double>(cols.size())));
    std::vector<Complex> w(rows.size());
    std::vector<Complex> back(cols.size());
    double previous = -1.0;
    for (unsigned iter = 1; iter <= 10000; ++iter) {
        out.iterations = iter;
        std::fill(w.begin(), w.end(), Complex(0.0));
        for (const Weighted& e : matrix) w[e.row] += e.a * v[e.col];
        std::fill(back.begin(), back.end(), Complex(0.0));
        for (const Weighted& e : matrix) back[e.col] += std::conj(e.a) * w[e.row];
        double norm = 0.0;
        for (const Complex& c : back) norm += std::norm(c);
        norm = std::sqrt(norm);
        out.value = std::sqrt(norm);
        if (norm == 0.0) return out;
        if (previous >= 0.0 && std::abs(norm - previous) <= tol * norm) return out;
        previous = norm;
        for (std::size_t i = 0; i < back.size(); ++i) v[i] = back[i] / norm;
    }
    out.converged = false;
    return out;
}

H1ProbeReport h1_l1_probe(const MeasureParams& mp, const FiniteKernel& k,
                          const std::vector<Atom>& atoms, double reference_factor) {
    H1ProbeReport report;
    report.samples = atoms.size();
    report.reference_bound =
        reference_factor * (l2_operator_norm(mp, k).value + hormander_constant(mp, k));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!validate_atom(mp, atoms[i]).valid) throw validation_error("not an atom");
        const double norm = lp_norm(apply_operator(mp, k, atom_function(mp, atoms[i])), 1.0);
        if (norm > report.worst_output_norm) {
            report.worst_output_norm = norm;
            report.worst_index = i;
        }
    }
    report.within_reference = report.worst_output_norm <= report.reference_bound + 1e-9;
    return report;
}

LpSweepReport lp_ratio_sweep(const MeasureParams& mp, const FiniteKernel& k,
                             const std::vector<double>& p_list,
                             const std::vector<TailConstantFunction>& samples,
                             double reference_cap, double slack) {
    for (double p : p_list)
        if (!(p > 1.0)) throw precondition_error("exponent must exceed 1");
    LpSweepReport report;
    report.l2_norm = l2_operator_norm(mp, k).value;
    report.reference_bound = std::max(report.l2_norm, reference_cap);

    std::vector<TailConstantFunction> images;
    images.reserve(samples.size());
    for (const TailConstantFunction& f : samples)
        images.push_back(apply_operator(mp, k, f));

    for (double p : p_list) {
        LpRatioRow row;
        row.p = p;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double base = lp_norm(samples[i], p);
            if (base == 0.0) continue;
            const double ratio = lp_norm(images[i], p) / base;
            if (ratio > row.worst_ratio) {
                row.worst_ratio = ratio;
                row.worst_index = i;
            }
        }
        report.within_reference =
            report.within_reference &&
            row.worst_ratio <= report.reference_bound * (1.0 + slack) + 1e-12;
        report.rows.push_back(row);
    }
    return report;
}

} // namespace treeharm

#include "treeharm/tree.hpp"

#include <cmath>
#include <limits>

namespace treeharm {

namespace {

using u128 = unsigned __int128;

constexpr double kLogSnapTol = 1e-12;

// Natural log of r with near-integer values snapped onto the integer, so
// that a radius computed as exp(-n) resolves on the closed side of the
// case split instead of drifting across it by rounding.
struct SnappedLog {
    double value = 0.0;
    bool integral = false;
    long long n = 0;
};

SnappedLog snapped_log(double r) {
    SnappedLog out;
    out.value = std::log(r);
    const double nearest = std::nearbyint(out.value);
    if (std::fabs(out.value - nearest) <= kLogSnapTol) {
        out.integral = true;
        out.n = static_cast<long long>(nearest);
    }
    return out;
}

} // namespace

VertexId cumulative_count(const TreeParams& tp, unsigned m) {
    u128 level_end = 0;
    u128 level_size = 1;
    for (unsigned level = 1; level <= m; ++level) {
        level_size = (level == 1) ? u128(tp.q) + 1 : level_size * tp.q;
        level_end += level_size;
        if (level_end > std::numeric_limits<VertexId>::max())
            throw validation_error("vertex index overflow");
    }
    return static_cast<VertexId>(level_end);
}

unsigned depth(const TreeParams& tp, VertexId k) {
    u128 level_end = 0;
    u128 level_size = 1;
    unsigned m = 0;
    while (k > level_end) {
        level_size = (m == 0) ? u128(tp.q) + 1 : level_size * tp.q;
        level_end += level_size;
        ++m;
    }
    return m;
}

VertexId parent(const TreeParams& tp, VertexId k) {
    if (k == 0) throw precondition_error("origin has no predecessor");
    if (k <= tp.q + 1) return 0;
    return (k - 2) / tp.q;
}

std::vector<VertexId> children(const TreeParams& tp, VertexId k) {
    const u128 first = (k == 0) ? 1 : u128(tp.q) * k + 2;
    const unsigned fan = (k == 0) ? tp.q + 1 : tp.q;
    if (first + fan - 1 > std::numeric_limits<VertexId>::max())
        throw validation_error("vertex index overflow");
    std::vector<VertexId> out;
    out.reserve(fan);
    for (unsigned i = 0; i < fan; ++i) out.push_back(static_cast<VertexId>(first) + i);
    return out;
}

VertexId iterated_parent(const TreeParams& tp, VertexId k, unsigned steps) {
    if (steps > depth(tp, k)) throw precondition_error("power exceeds depth");
    VertexId v = k;
    for (unsigned i = 0; i < steps; ++i) v = parent(tp, v);
    return v;
}

VertexId confluent(const TreeParams& tp, VertexId a, VertexId b) {
    unsigned da = depth(tp, a);
    unsigned db = depth(tp, b);
    while (da > db) { a = parent(tp, a); --da; }
    while (db > da) { b = parent(tp, b); --db; }
    while (a != b) { a = parent(tp, a); b = parent(tp, b); }
    return a;
}

bool is_ancestor_or_self(const TreeParams& tp, VertexId a, VertexId x) {
    const unsigned da = depth(tp, a);
    const unsigned dx = depth(tp, x);
    if (da > dx) return false;
    return iterated_parent(tp, x, dx - da) == a;
}

std::pair<VertexId, VertexId> level_range(const TreeParams& tp, unsigned m) {
    if (m == 0) return {0, 0};
    return {cumulative_count(tp, m - 1) + 1, cumulative_count(tp, m)};
}

double gromov_distance(const TreeParams& tp, VertexId a, VertexId b) {
    if (a == b) return 0.0;
    return std::exp(-static_cast<double>(depth(tp, confluent(tp, a, b))));
}

bool operator<(const DyadicSet& a, const DyadicSet& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.vertex < b.vertex;
}

GromovBall gromov_ball(const TreeParams& tp, VertexId x, double r) {
    if (!(r > 0.0)) throw precondition_error("radius must be positive");
    const unsigned d = depth(tp, x);
    const SnappedLog lg = snapped_log(r);

    const bool at_most_point =
        lg.integral ? lg.n <= -static_cast<long long>(d) : lg.value < -static_cast<double>(d);
    if (at_most_point) return {x, r, DyadicSet::singleton(x)};

    const bool beyond_unit = lg.integral ? lg.n > 0 : lg.value > 0.0;
    if (beyond_unit) return {x, r, DyadicSet::whole_space()};

    // Root depth of the resolved sector is -floor(log r), which is 0 only
    // at r = 1 where the sector is the whole space.
    const long long root_depth = lg.integral ? -lg.n : -static_cast<long long>(std::floor(lg.value));
    if (root_depth == 0) return {x, r, DyadicSet::whole_space()};
    const VertexId root = iterated_parent(tp, x, d - static_cast<unsigned>(root_depth));
    return {x, r, DyadicSet::sector(root)};
}

std::vector<GromovBall> distinct_balls(const TreeParams& tp, VertexId x) {
    const unsigned d = depth(tp, x);
    std::vector<GromovBall> out;
    out.reserve(d + 2);
    out.push_back({x, std::exp(-static_cast<double>(d)), DyadicSet::singleton(x)});
    // exp(0.5 - m) has non-integral log in (-m, -m+1), so it resolves to
    // the sector rooted at depth m for every 1 <= m <= |x|.
    for (unsigned m = d; m >= 1; --m) {
        const double r = std::exp(0.5 - static_cast<double>(m));
        out.push_back({x, r, DyadicSet::sector(iterated_parent(tp, x, d - m))});
    }
    out.push_back({x, 1.5, DyadicSet::whole_space()});
    return out;
}

} // namespace treeharm

#include "doctest.h"

#include <cmath>
#include <vector>

#include "treeharm/measure.hpp"

using namespace treeharm;

namespace {

// Truncated series for the subtree mass below a depth-n vertex: level l of
// the subtree holds q^l vertices of weight q^{-alpha(n+l)}. 200 terms push
// the remainder far below double precision for every alpha > 1 tested.
double sector_mass_series(unsigned q, double alpha, unsigned n) {
    double sum = 0.0;
    for (unsigned l = 0; l < 200; ++l)
        sum += std::pow(double(q), double(l)) * std::pow(double(q), -alpha * (n + l));
    return sum;
}

double total_mass_series(unsigned q, double alpha) {
    double sum = 1.0;
    for (unsigned l = 1; l < 200; ++l)
        sum += (q + 1) * std::pow(double(q), double(l - 1)) * std::pow(double(q), -alpha * l);
    return sum;
}

bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

} // namespace

TEST_SUITE("measure") {

TEST_CASE("point, sector and total mass closed forms") {
    const MeasureParams m22(TreeParams(2), 2.0);
    CHECK(point_mass(m22, 0) == 1.0);
    CHECK(point_mass(m22, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(point_mass(m22, 4) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(sector_mass(m22, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sector_mass(m22, 4) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(total_mass(m22) == doctest::Approx(2.5).epsilon(1e-14));

    const MeasureParams m32(TreeParams(3), 2.0);
    CHECK(sector_mass(m32, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(total_mass(m32) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    const MeasureParams m23(TreeParams(2), 3.0);
    CHECK(total_mass(m23) == doctest::Approx(1.5).epsilon(1e-14));

    // The subtree below the root is the whole space.
    CHECK(sector_mass(m22, 0) == total_mass(m22));

    CHECK_THROWS_AS(MeasureParams(TreeParams(2), 1.0), validation_error);
    CHECK_THROWS_AS(MeasureParams(TreeParams(2), 0.5), validation_error);
}

TEST_CASE("closed forms agree with truncated series") {
    for (unsigned q : {2u, 3u}) {
        for (double alpha : {1.2, 1.5, 2.0, 3.0}) {
            const MeasureParams mp(TreeParams(q), alpha);
            CHECK(close_rel(total_mass(mp), total_mass_series(q, alpha), 1e-12));
            const VertexId last = cumulative_count(mp.tree, 4);
            for (VertexId v = 1; v <= last; ++v)
                CHECK(close_rel(sector_mass(mp, v),
                                sector_mass_series(q, alpha, depth(mp.tree, v)), 1e-12));
        }
    }
}

TEST_CASE("mass recursion: a sector is its root plus its child sectors") {
    for (unsigned q : {2u, 3u}) {
        for (double alpha : {1.2, 2.0, 3.0}) {
            const MeasureParams mp(TreeParams(q), alpha);
            double whole = point_mass(mp, 0);
            for (VertexId c : children(mp.tree, 0)) whole += sector_mass(mp, c);
            CHECK(close_rel(whole, total_mass(mp), 1e-12));
            for (VertexId v = 1; v <= cumulative_count(mp.tree, 4); ++v) {
                double sum = point_mass(mp, v);
                for (VertexId c : children(mp.tree, v)) sum += sector_mass(mp, c);
                CHECK(close_rel(sum, sector_mass(mp, v), 1e-12));
            }
        }
    }
}

TEST_CASE("doubling constant branches") {
    CHECK(doubling_constant(MeasureParams(TreeParams(2), 2.0)) == doctest::Approx(5.0));
    CHECK(doubling_constant(MeasureParams(TreeParams(3), 2.0)) == doctest::Approx(10.0));
    const double small_alpha = 1.0 / (1.0 - std::pow(2.0, -0.1));
    CHECK(doubling_constant(MeasureParams(TreeParams(2), 1.1)) ==
          doctest::Approx(small_alpha).epsilon(1e-12));
    CHECK(small_alpha == doctest::Approx(14.93).epsilon(1e-3));
}

TEST_CASE("doubling verification at alpha = 2") {
    const MeasureParams mp(TreeParams(2), 2.0);
    const auto grid = doubling_radius_grid(6, 50);
    CHECK(grid.size() >= 50);
    const auto rep = verify_doubling(mp, 6, grid);
    CHECK(rep.pass);
    // The worst jump is a depth-1 sector doubling to the whole space,
    // with ratio exactly q^alpha + 1.
    CHECK(rep.worst_ratio == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("doubling verification reports the root jump for small alpha") {
    // For alpha below log_q(q+1) the ball around the root that doubles from
    // {o} to the whole space has ratio total_mass, which exceeds
    // max{q^alpha + 1, (1 - q^{1-alpha})^{-1}}. The checker must surface
    // that honestly rather than clamp it.
    const MeasureParams mp(TreeParams(2), 1.2);
    CHECK(total_mass(mp) > doubling_constant(mp));
    const auto rep = verify_doubling(mp, 4, doubling_radius_grid(4, 50));
    CHECK(!rep.pass);
    CHECK(rep.worst_vertex == 0);
    CHECK(rep.worst_ratio == doctest::Approx(total_mass(mp)).epsilon(1e-12));

    // Away from the root the three-ratio bound does hold.
    const auto grid = doubling_radius_grid(4, 50);
    double worst_nonroot = 0.0;
    for (VertexId x = 1; x <= cumulative_count(mp.tree, 4); ++x)
        for (double r : grid) {
            const double ratio = set_mass(mp, gromov_ball(mp.tree, x, 2 * r).resolved) /
                                 set_mass(mp, gromov_ball(mp.tree, x, r).resolved);
            worst_nonroot = std::max(worst_nonroot, ratio);
        }
    CHECK(worst_nonroot <= doubling_constant(mp) * (1.0 + 1e-9));
}

TEST_CASE("region canonicalization and containment") {
    const TreeParams tp(2);

    const Region r = Region::canonical(tp, {1, 4}, {5, 2});
    CHECK(r.sectors == std::vector<VertexId>{1});   // 4 lies below 1
    CHECK(r.singletons == std::vector<VertexId>{2}); // 5 lies below 1

    CHECK(region_contains(tp, r, 1));
    CHECK(region_contains(tp, r, 4));
    CHECK(region_contains(tp, r, 10)); // below 4
    CHECK(region_contains(tp, r, 2));
    CHECK(!region_contains(tp, r, 0));
    CHECK(!region_contains(tp, r, 3));
    CHECK(!region_contains(tp, r, 6)); // below 2

    CHECK_THROWS_AS(Region::checked(tp, {1}, {4}), validation_error);
    CHECK_THROWS_AS(Region::checked(tp, {1, 4}, {}), validation_error);
    CHECK_THROWS_AS(Region::checked(tp, {1, 1}, {}), validation_error);
    CHECK_NOTHROW(Region::checked(tp, {1}, {0}));

    // A sector rooted at 0 is the whole space and absorbs everything.
    CHECK(Region::canonical(tp, {0, 2}, {5}) == Region::whole());
}

TEST_CASE("region boolean operations") {
    const TreeParams tp(2);

    const Region comp1 = region_complement(tp, Region::of(DyadicSet::sector(1)));
    CHECK(comp1.sectors == std::vector<VertexId>{2, 3});
    CHECK(comp1.singletons == std::vector<VertexId>{0});

    CHECK(region_complement(tp, Region::whole()).is_empty());
    CHECK(region_complement(tp, Region::empty()) == Region::whole());

    // T_1 minus T_4 leaves the vertex 1 and the sibling sector T_5.
    const Region diff = region_intersect(
        tp, Region::of(DyadicSet::sector(1)),
        region_complement(tp, Region::of(DyadicSet::sector(4))));
    CHECK(diff.sectors == std::vector<VertexId>{5});
    CHECK(diff.singletons == std::vector<VertexId>{1});

    const Region u = region_union(tp, Region::of(DyadicSet::sector(1)),
                                  Region::of(DyadicSet::singleton(4)));
    CHECK(u == Region::of(DyadicSet::sector(1)));

    // Double complement restores the canonical form.
    for (const Region& r : {Region::of(DyadicSet::sector(4)), diff, comp1,
                            Region::canonical(tp, {2}, {0, 1})}) {
        CHECK(region_complement(tp, region_complement(tp, r)) == r);
        CHECK(region_intersect(tp, r, region_complement(tp, r)).is_empty());
        CHECK(region_merged(tp, region_union(tp, r, region_complement(tp, r))) ==
              Region::whole());
    }
}

TEST_CASE("region mass") {
    const MeasureParams mp(TreeParams(2), 2.0);
    const TreeParams& tp = mp.tree;

    const Region all = Region::canonical(tp, {1, 2, 3}, {0});
    CHECK(region_mass(mp, all) == doctest::Approx(total_mass(mp)).epsilon(1e-14));
    CHECK(region_mass(mp, Region::whole()) == doctest::Approx(total_mass(mp)));

    const Region r = Region::canonical(tp, {1}, {2});
    CHECK(region_mass(mp, r) == doctest::Approx(0.5 + 0.25).epsilon(1e-14));
    CHECK(region_mass(mp, region_complement(tp, r)) ==
          doctest::Approx(total_mass(mp) - 0.75).epsilon(1e-12));

    // Additivity over a disjoint split.
    const Region a = Region::of(DyadicSet::sector(4));
    const Region b = region_intersect(tp, Region::of(DyadicSet::sector(1)),
                                      region_complement(tp, a));
    CHECK(region_intersect(tp, a, b).is_empty());
    CHECK(region_mass(mp, a) + region_mass(mp, b) ==
          doctest::Approx(region_mass(mp, region_union(tp, a, b))).epsilon(1e-12));
}

TEST_CASE("region merge normalization") {
    const TreeParams tp(2);
    const Region r = Region::canonical(tp, {4, 5}, {1});
    CHECK(region_merged(tp, r) == Region::of(DyadicSet::sector(1)));

    // Cascading merge all the way to the whole space.
    const Region full = Region::canonical(tp, {4, 5, 2, 3}, {0, 1});
    CHECK(region_merged(tp, full) == Region::whole());

    // Incomplete families stay put.
    const Region partial = Region::canonical(tp, {4}, {1});
    CHECK(region_merged(tp, partial) == partial);
}

TEST_CASE("reference measure closed forms match truncated series") {
    const TreeParams tp(2);
    const ReferenceMeasure rm{{1.0, 0.5, 0.2, 0.1}, 0.3};
    validate_reference(tp, rm);

    for (unsigned n : {1u, 2u, 3u, 5u, 8u}) {
        double series = 0.0;
        for (unsigned l = 0; l < 400; ++l)
            series += std::pow(2.0, double(l)) * reference_point(rm, n + l);
        CHECK(close_rel(reference_sector(tp, rm, n), series, 1e-12));
    }
    double total = reference_point(rm, 0);
    for (unsigned l = 1; l < 400; ++l)
        total += 3.0 * std::pow(2.0, double(l - 1)) * reference_point(rm, l);
    CHECK(close_rel(reference_total(tp, rm), total, 1e-12));
}

TEST_CASE("reference measure classification") {
    const TreeParams t2(2);

    // The vertex measure itself: both ratios are exact closed forms.
    const MeasureParams m22(t2, 2.0);
    const auto self = reference_from_measure(m22, 6);
    const auto cls = classify_reference_measure(t2, self);
    CHECK(cls.optimal);
    CHECK(cls.parent_bounded);
    CHECK(cls.optimality == doctest::Approx(2.0).epsilon(1e-12)); // (1 - q^{1-a})^{-1}
    CHECK(cls.parent == doctest::Approx(4.0).epsilon(1e-12));     // q^a

    // Near-critical tail: the ratio blows past any practical bound.
    const ReferenceMeasure critical{{1.0}, 0.5 - 1e-9};
    const auto flagged = classify_reference_measure(t2, critical);
    CHECK(!flagged.optimal);
    CHECK(flagged.optimality > 1e8);

    // A huge drop inside the head is finite data: still classified bounded
    // under a bound configured above it, and the ratio is reported.
    const ReferenceMeasure drop{{1.0, 1e-9}, 0.3};
    const auto wide = classify_reference_measure(t2, drop, 1e10);
    CHECK(wide.parent_bounded);
    CHECK(wide.parent == doctest::Approx(1e9).epsilon(1e-12));
    CHECK(!classify_reference_measure(t2, drop).parent_bounded); // default bound

    CHECK_THROWS_AS(validate_reference(t2, ReferenceMeasure{{1.0, 2.0}, 0.3}),
                    validation_error);
    CHECK_THROWS_AS(validate_reference(t2, ReferenceMeasure{{1.0}, 0.5}),
                    validation_error);
    CHECK_THROWS_AS(validate_reference(t2, ReferenceMeasure{{1.0}, 0.0}),
                    validation_error);
    CHECK_THROWS_AS(validate_reference(t2, ReferenceMeasure{{}, 0.3}),
                    validation_error);
    CHECK_THROWS_AS(validate_reference(t2, ReferenceMeasure{{1.0, -0.5}, 0.3}),
                    validation_error);
}

} // TEST_SUITE

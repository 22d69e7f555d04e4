#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <queue>
#include <random>

#include "polynodal/star.hpp"

using namespace polynodal;

namespace {

// Dense ray-casting oracle: grid-sample the connected component of
// B_r(x) ∩ P containing x, then check every segment from x to a sampled
// point stays inside closure(P). Returns +1 star / -1 violated / 0 marginal.
int star_oracle(const Polytope& P, Vec2 x, double r, int grid = 140) {
    Vec2 q = x;
    if (P.boundary_distance(x) < 1e-9) {
        // probe a few inward nudges to find a strictly interior start
        for (double e : {1e-4, 1e-5, 1e-6}) {
            bool found = false;
            for (int k = 0; k < 16 && !found; ++k) {
                double a = 2 * std::numbers::pi * k / 16.0;
                Vec2 c = x + Vec2{std::cos(a), std::sin(a)} * (e * r);
                if (P.strictly_inside(c) && (c - x).norm() < r) {
                    q = c;
                    found = true;
                }
            }
            if (found) break;
        }
    }
    double h = 2.0 * r / grid;
    auto cell_center = [&](int i, int j) {
        return Vec2{x.x - r + (i + 0.5) * h, x.y - r + (j + 0.5) * h};
    };
    auto in_region = [&](const Vec2& p) {
        return (p - x).norm() <= r && P.strictly_inside(p);
    };
    std::vector<char> comp(static_cast<size_t>(grid * grid), 0);
    int qi = static_cast<int>((q.x - (x.x - r)) / h);
    int qj = static_cast<int>((q.y - (x.y - r)) / h);
    qi = std::clamp(qi, 0, grid - 1);
    qj = std::clamp(qj, 0, grid - 1);
    std::queue<std::pair<int, int>> bfs;
    if (in_region(cell_center(qi, qj))) {
        comp[static_cast<size_t>(qj * grid + qi)] = 1;
        bfs.emplace(qi, qj);
    }
    while (!bfs.empty()) {
        auto [i, j] = bfs.front();
        bfs.pop();
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ni = i + di[k], nj = j + dj[k];
            if (ni < 0 || nj < 0 || ni >= grid || nj >= grid) continue;
            size_t idx = static_cast<size_t>(nj * grid + ni);
            if (comp[idx] || !in_region(cell_center(ni, nj))) continue;
            comp[idx] = 1;
            bfs.emplace(ni, nj);
        }
    }
    double slack = 0.25 * h;  // ignore blockages thinner than the grid scale
    bool blocked = false;
    for (int j = 0; j < grid && !blocked; ++j)
        for (int i = 0; i < grid && !blocked; ++i) {
            if (!comp[static_cast<size_t>(j * grid + i)]) continue;
            Vec2 y = cell_center(i, j);
            for (int k = 1; k <= 96; ++k) {
                Vec2 p = x + (y - x) * (k / 96.0);
                if (!P.contains(p) && P.boundary_distance(p) > slack) {
                    blocked = true;
                    break;
                }
            }
        }
    return blocked ? -1 : +1;
}

}  // namespace

TEST_CASE("convex domains are star-shaped at every radius") {
    Polytope sq = make_unit_square();
    for (double r : {0.1, 0.5, 2.0}) {
        auto c = star_certificate(sq, {0.5, 0.5}, r);
        CHECK(c.star_shaped);
    }
    // boundary and vertex centers of a convex polygon also work
    CHECK(star_certificate(sq, {0.5, 0.0}, 2.0).star_shaped);
    CHECK(star_certificate(sq, {0.0, 0.0}, 2.0).star_shaped);
    Polytope pent = make_regular_polygon(5, 1.0);
    CHECK(star_certificate(pent, {0.0, 0.0}, 3.0).star_shaped);
}

TEST_CASE("certificate preconditions") {
    Polytope sq = make_unit_square();
    CHECK_THROWS_AS(star_certificate(sq, {0.5, 0.5}, 0.0), Error);
    CHECK_THROWS_AS(star_certificate(sq, {2.0, 2.0}, 1.0), Error);
}

TEST_CASE("L-shape reentrant vertex is apex-star") {
    Polytope L = make_l_shape();
    auto c = star_certificate(L, {0.0, 0.0}, 0.5);
    CHECK(c.star_shaped);
    CHECK(star_oracle(L, {0.0, 0.0}, 0.5) == +1);
    // the 270-degree corner sees the whole polygon, so every radius passes
    CHECK(star_certificate(L, {0.0, 0.0}, 3.0).star_shaped);
}

TEST_CASE("L-shape violation with reentrant-edge witness") {
    Polytope L = make_l_shape();
    Vec2 x{-0.5, 0.5};
    auto ok = star_certificate(L, x, 0.5);
    CHECK(ok.star_shaped);
    auto bad = star_certificate(L, x, 1.2);
    REQUIRE(!bad.star_shaped);
    REQUIRE(bad.witness.has_value());
    // the witness sits on the horizontal reentrant edge (1,0)->(0,0), facet 2
    CHECK(bad.witness->facet == 2);
    CHECK(bad.witness->point.y == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(bad.witness->value < 0.0);
    CHECK(star_oracle(L, x, 1.2) == -1);
}

TEST_CASE("component boundary piece counts on the square") {
    Polytope sq = make_unit_square();
    Vec2 c{0.5, 0.5};
    auto tiny = component_boundary(sq, c, 0.4);
    CHECK(tiny.pure_disk);
    CHECK(tiny.segments.empty());
    auto mid = component_boundary(sq, c, 0.6);
    CHECK(mid.segments.size() == 4);
    CHECK(mid.arcs.size() == 4);
    for (const auto& s : mid.segments) {
        CHECK((s.a - c).norm() <= 0.6 + 1e-9);
        CHECK((s.b - c).norm() <= 0.6 + 1e-9);
    }
    auto big = component_boundary(sq, c, 2.0);
    CHECK(big.whole_polygon);
    CHECK(big.segments.size() == 4);
    CHECK(big.arcs.empty());
}

TEST_CASE("component selection excludes pieces across a notch") {
    // deep slit: the far side of the notch is in the ball but in a different
    // component, so its (violating) wall must not appear in the certificate
    Polytope N = Polytope::polygon({{0, 0}, {4, 0}, {4, 3}, {2.1, 3}, {2.1, 0.5},
                                    {1.9, 0.5}, {1.9, 3}, {0, 3}});
    Vec2 x{1.0, 2.0};
    double r = 1.5;
    // the right notch wall (facet 3) is inside the ball...
    CHECK(point_segment_distance(x, {2.1, 3}, {2.1, 0.5}) < r);
    // ...but the certificate only sees the component containing x and passes
    auto c = star_certificate(N, x, r);
    CHECK(c.star_shaped);
    auto cb = component_boundary(N, x, r);
    for (const auto& s : cb.segments) CHECK(s.facet != 3);
    CHECK(star_oracle(N, x, r) == +1);
}

TEST_CASE("certificate agrees with ray-casting oracle on random balls") {
    Polytope L = make_l_shape();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), ur(0.15, 2.0);
    int done = 0;
    while (done < 40) {
        Vec2 x{ux(rng), ux(rng)};
        if (!L.strictly_inside(x)) continue;
        double r = ur(rng);
        auto c = star_certificate(L, x, r);
        if (std::abs(c.min_normal_value) < 2e-2) continue;  // skip marginal cases
        ++done;
        CHECK(star_oracle(L, x, r) == (c.star_shaped ? +1 : -1));
    }
}

TEST_CASE("msr lower bounds on the square") {
    Polytope sq = make_unit_square();
    double cs = sq.c_star();
    auto center = msr_lower_bounds(sq, {0.5, 0.5}, cs);
    CHECK(center.generic_bound == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(!center.stratum_bound);
    CHECK(!center.vertex_bound);
    auto corner = msr_lower_bounds(sq, {0.0, 0.0}, cs);
    CHECK(corner.vertex_bound.has_value());
    CHECK(*corner.vertex_bound == doctest::Approx(1.0));
    CHECK(corner.vertex_radius_r0 == doctest::Approx(1.0));
}

TEST_CASE("msr lower bounds on the L-shape reentrant edge") {
    Polytope L = make_l_shape();
    double cs = L.c_star();
    auto b = msr_lower_bounds(L, {0.5, 0.0}, cs);
    REQUIRE(b.stratum_bound.has_value());
    CHECK(*b.stratum_bound == doctest::Approx(cs * 0.5));
    CHECK(b.generic_bound == doctest::Approx(0.5));
}

TEST_CASE("max star radius: convex interior point saturates the diameter") {
    Polytope sq = make_unit_square();
    auto m = max_star_radius(sq, {0.3, 0.7});
    CHECK(m.value == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.r_hi - m.r_lo <= 1e-6 * sq.diameter() + 1e-15);
}

TEST_CASE("max star radius: L-shape reentrant vertex sees everything") {
    // the 270-degree corner lies in the star kernel, so R* caps at diam = 2*sqrt(2)
    Polytope L = make_l_shape();
    auto m = max_star_radius(L, {0.0, 0.0});
    CHECK(m.value == doctest::Approx(2.0 * std::sqrt(2.0)));
    REQUIRE(m.vertex_bound.has_value());
    CHECK(*m.vertex_bound == doctest::Approx(1.0));  // Prop-style vertex clearance
}

TEST_CASE("max star radius: first obstruction at the reentrant corner") {
    Polytope L = make_l_shape();
    // from (-0.5, 0.5) the reentrant edge y=0 becomes visible-and-violating
    // exactly when the ball reaches the corner (0,0): R* = sqrt(0.5)
    auto m = max_star_radius(L, {-0.5, 0.5});
    CHECK(m.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
    // symmetric twin across the corner
    auto m2 = max_star_radius(L, {0.5, -0.5});
    CHECK(m2.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
    // kernel point: sees everything
    auto k = max_star_radius(L, {-0.5, -0.5});
    CHECK(k.value == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("max star radius: edge-interior point on the reentrant wall") {
    Polytope L = make_l_shape();
    Vec2 x{0.0, 0.25};
    auto m = max_star_radius(L, x);
    CHECK(m.generic_bound == doctest::Approx(0.25));
    // the obstruction is again the corner at distance d(x, F^0) = 0.25
    CHECK(m.value == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("msr dominance over lower bounds at random points") {
    for (const Polytope& P : {make_unit_square(), make_l_shape(), make_regular_polygon(5, 1.0)}) {
        double cs = P.c_star();
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ux(-1.1, 1.1);
        int done = 0;
        while (done < 25) {
            Vec2 x{ux(rng), ux(rng)};
            if (!P.contains(x)) continue;
            ++done;
            auto m = max_star_radius(P, x, 1e-6 * P.diameter(), cs);
            double slack = 1e-9 * P.diameter() + 1e-6 * P.diameter();
            CHECK(m.value >= m.generic_bound - slack);
            if (m.stratum_bound) CHECK(m.value >= *m.stratum_bound - slack);
            if (m.vertex_bound) CHECK(m.value >= *m.vertex_bound - slack);
            CHECK(m.value <= P.diameter() + 1e-12);
            CHECK(star_certificate(P, x, std::max(m.r_lo, 1e-12)).star_shaped);
        }
        // boundary points too
        done = 0;
        std::uniform_real_distribution<double> us(0.0, P.perimeter());
        while (done < 25) {
            Vec2 x = P.boundary_point_at(us(rng));
            ++done;
            auto m = max_star_radius(P, x, 1e-6 * P.diameter(), cs);
            double slack = 2e-6 * P.diameter();
            CHECK(m.value >= m.generic_bound - slack);
            if (m.stratum_bound) CHECK(m.value >= *m.stratum_bound - slack);
            if (m.vertex_bound) CHECK(m.value >= *m.vertex_bound - slack);
        }
    }
}

TEST_CASE("interior points are trivially star for r below the boundary distance") {
    Polytope L = make_l_shape();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    int done = 0;
    while (done < 50) {
        Vec2 x{ux(rng), ux(rng)};
        if (!L.strictly_inside(x)) continue;
        double d = L.boundary_distance(x);
        if (d < 1e-3) continue;
        ++done;
        auto c = star_certificate(L, x, 0.9 * d);
        CHECK(c.star_shaped);
        CHECK(c.component_pieces == 0);
    }
}

TEST_CASE("vertical shift stability") {
    Polytope sq = make_unit_square();
    ChartFrame bottom{{0.5, 0.0}, {0.0, 1.0}, 1.0};
    auto r = vertical_shift_check(sq, {0.5, 0.0}, bottom, 0.1);
    CHECK(r.holds);
    CHECK(r.r_star_x == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.r_double_star == doctest::Approx(0.25));
    CHECK(r.r_star_shifted >= 0.5 * r.r_double_star);
    // boundary case t = R**/2 holds too
    CHECK(vertical_shift_check(sq, {0.5, 0.0}, bottom, 0.125).holds);
    CHECK_THROWS_AS(vertical_shift_check(sq, {0.5, 0.0}, bottom, 0.2), Error);
    CHECK_THROWS_AS(vertical_shift_check(sq, {0.5, 0.0}, bottom, 0.0), Error);

    Polytope L = make_l_shape();
    ChartFrame corner{{0.0, 0.0}, Vec2{-1.0, -1.0}.normalized(), 1.8};
    auto s = vertical_shift_check(L, {0.0, 0.0}, corner, 0.2);
    CHECK(s.holds);
    CHECK(s.r_star_x == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(s.r_star_shifted >= 0.5 * s.r_double_star);
}

TEST_CASE("boundary cover construction and verification") {
    struct Case {
        Polytope P;
        double r0;
        size_t vertices;
    };
    std::vector<Case> cases;
    cases.push_back({make_unit_square(), 1.0, 4});
    cases.push_back({make_regular_polygon(5, 1.0), 0.0, 5});
    cases.push_back({make_l_shape(), 0.9, 6});
    for (auto& c : cases) {
        if (c.r0 == 0.0) c.r0 = 0.5 * c.P.vertex_radius_r0();
        StarCover cover = boundary_cover(c.P, c.r0);
        size_t level0 = 0;
        for (const auto& b : cover.balls) {
            CHECK(b.certificate.star_shaped);
            CHECK(b.covering_radius <= b.certified_radius + 1e-15);
            if (b.level == 0) ++level0;
        }
        CHECK(level0 == c.vertices);
        auto rep = cover_verify(c.P, cover, 20000);
        CHECK(rep.ok);
        CHECK(rep.gaps == 0);
        CHECK(rep.certificate_failures == 0);
        CHECK(rep.max_multiplicity >= 1);
    }
}

TEST_CASE("cover rejects oversized base radius and reports deleted-ball gaps") {
    Polytope sq = make_unit_square();
    CHECK_THROWS_AS(boundary_cover(sq, 2.0 * sq.vertex_radius_r0()), Error);

    StarCover cover = boundary_cover(sq, 1.0);
    // deleting a vertex ball leaves its corner uncovered
    StarCover broken = cover;
    broken.balls.erase(broken.balls.begin());
    auto rep = cover_verify(sq, broken, 20000);
    CHECK(!rep.ok);
    CHECK(rep.gaps > 0);
    REQUIRE(rep.gap_witness.has_value());
    CHECK((*rep.gap_witness - sq.vertex(0)).norm() < 0.1);
    CHECK_THROWS_AS(cover_verify(sq, broken, 1000, true), Error);
}

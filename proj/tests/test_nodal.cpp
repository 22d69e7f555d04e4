#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "polynodal/nodal.hpp"

using namespace polynodal;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<DiscretePlanarField> interpolate(std::shared_ptr<const Polytope> P,
                                                 std::shared_ptr<const Mesh> mesh,
                                                 const std::function<double(const Vec2&)>& fn) {
    std::vector<double> vals(mesh->nodes.size());
    for (size_t i = 0; i < mesh->nodes.size(); ++i) vals[i] = fn(mesh->nodes[i]);
    return std::make_shared<DiscretePlanarField>(P, mesh, std::move(vals));
}

bool in_triangle(const Mesh& mesh, int t, const Vec2& p, double tol) {
    const MeshTriangle& tr = mesh.triangles[static_cast<size_t>(t)];
    Vec2 a = mesh.nodes[static_cast<size_t>(tr.v[0])];
    Vec2 b = mesh.nodes[static_cast<size_t>(tr.v[1])];
    Vec2 c = mesh.nodes[static_cast<size_t>(tr.v[2])];
    double det = (b - a).cross(c - a);
    double l1 = (p - a).cross(c - a) / det;
    double l2 = (b - a).cross(p - a) / det;
    return l1 >= -tol && l2 >= -tol && l1 + l2 <= 1.0 + tol;
}

}  // namespace

TEST_CASE("linear field x - 0.3: exact vertical nodal line") {
    auto P = std::make_shared<Polytope>(make_unit_square());
    auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.05));
    auto f = interpolate(P, mesh, [](const Vec2& p) { return p.x - 0.3; });
    NodalSet z = extract_nodal_set(*f);

    CHECK(z.degenerate_triangles.empty());
    CHECK(!z.segments.empty());
    // the P1 interpolant of a linear function is exact: zero set is x = 0.3
    CHECK(nodal_measure(z) == doctest::Approx(1.0).epsilon(1e-9));
    double sum = 0.0;
    for (const NodalSegment& s : z.segments) {
        CHECK(std::abs(s.a.x - 0.3) <= 1e-9);
        CHECK(std::abs(s.b.x - 0.3) <= 1e-9);
        CHECK(in_triangle(*mesh, s.triangle, s.a, 1e-9));
        CHECK(in_triangle(*mesh, s.triangle, s.b, 1e-9));
        sum += s.length();
    }
    CHECK(sum == doctest::Approx(z.total_length).epsilon(1e-14));
}

TEST_CASE("constant-sign and identically-zero fields") {
    auto P = std::make_shared<Polytope>(make_unit_square());
    auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.1));

    auto pos = interpolate(P, mesh, [](const Vec2&) { return 1.0; });
    NodalSet zp = extract_nodal_set(*pos);
    CHECK(zp.segments.empty());
    CHECK(nodal_measure(zp) == 0.0);

    auto zero = interpolate(P, mesh, [](const Vec2&) { return 0.0; });
    NodalSet zz = extract_nodal_set(*zero);
    CHECK(zz.segments.empty());
    CHECK(zz.degenerate_triangles.size() == mesh->triangles.size());
    CHECK(zz.degenerate_area == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("separable modes: nodal length matches the line count") {
    auto P = std::make_shared<Polytope>(make_unit_square());

    {
        auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.03));
        auto f = interpolate(P, mesh, [](const Vec2& p) {
            return std::sin(2.0 * kPi * p.x) * std::sin(kPi * p.y);
        });
        CHECK(nodal_measure(extract_nodal_set(*f)) == doctest::Approx(1.0).epsilon(0.03));
    }
    {
        // (3,2): interior lines x in {1/3, 2/3} and y = 1/2, total 3
        auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.01));
        auto f = interpolate(P, mesh, [](const Vec2& p) {
            return std::sin(3.0 * kPi * p.x) * std::sin(2.0 * kPi * p.y);
        });
        NodalSet z = extract_nodal_set(*f);
        CHECK(nodal_measure(z) == doctest::Approx(3.0).epsilon(0.02));

        // midpoint classification => exact additivity over a partition
        double q = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                q += nodal_measure(z, [i, j](const Vec2& p) {
                    bool right = p.x > 0.5, top = p.y > 0.5;
                    return right == (i == 1) && top == (j == 1);
                });
        CHECK(q == doctest::Approx(nodal_measure(z)).epsilon(1e-12));

        double strip = nodal_measure_boundary_strip(z, *P, 0.1);
        double inner = nodal_measure(z, [&](const Vec2& p) { return P->boundary_distance(p) > 0.1; });
        CHECK(strip + inner == doctest::Approx(nodal_measure(z)).epsilon(1e-12));
        CHECK(strip > 0.0);
    }
}

TEST_CASE("L-shape eigenfunction: nodal length stable under refinement") {
    auto P = std::make_shared<Polytope>(make_l_shape());
    auto length_at = [&](double h) {
        auto mesh = std::make_shared<Mesh>(generate_mesh(*P, h));
        auto pairs = solve_eigen(*mesh, 4);
        DiscretePlanarField f(P, mesh, pairs[3].node_values);
        return nodal_measure(extract_nodal_set(f));
    };
    double c = length_at(0.04), fine = length_at(0.02);
    INFO("L-shape mode 4 length: h=0.04 -> ", c, ", h=0.02 -> ", fine);
    CHECK(std::abs(c - fine) <= 0.01 * fine);
}

TEST_CASE("flat local bound: harmonic calibration and boundary-trace case") {
    // Re(z^2) on a square with the 8r-ball inscribed: clip-free N = 6,
    // nodal rays give rho = 4/7
    auto big = std::make_shared<Polytope>(
        Polytope::polygon({{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}));
    auto mesh = std::make_shared<Mesh>(generate_mesh(*big, 0.04));
    auto f = interpolate(big, mesh, [](const Vec2& p) { return p.x * p.x - p.y * p.y; });
    NodalSet z = extract_nodal_set(*f);
    auto u = std::make_shared<PlanarAdapterField>(harmonic_polynomial_field(2, *big));
    auto rep = local_flat_bound_check(*u, z, Vec3{0.0, 0.0, 0.0}, 0.25);
    CHECK(rep.n_4r == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(rep.length == doctest::Approx(4.0 * 0.25).epsilon(0.02));
    CHECK(rep.rho == doctest::Approx(4.0 / 7.0).epsilon(0.02));
    CHECK(rep.pass);

    // too close to a vertex: flatness hypothesis fails
    try {
        local_flat_bound_check(*u, z, Vec3{-1.9, -1.9, 0.0}, 0.25);
        FAIL("expected flatness rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FlatnessViolation);
    }

    // u = y on the half-plane patch: the zero set is the Dirichlet trace,
    // excluded by construction, so the interior measure vanishes
    auto hp = std::make_shared<Polytope>(
        Polytope::polygon({{-8, 0}, {8, 0}, {8, 8}, {-8, 8}}));
    auto hmesh = std::make_shared<Mesh>(generate_mesh(*hp, 0.4));
    auto hf = interpolate(hp, hmesh, [](const Vec2& p) { return p.y; });
    NodalSet hz = extract_nodal_set(*hf);
    CHECK(nodal_measure(hz) == 0.0);
    auto hu = std::make_shared<PlanarAdapterField>(std::make_shared<AnalyticPlanarField>(
        *hp, [](const Vec2& p) { return p.y; }, [](const Vec2&) { return Vec2{0.0, 1.0}; }));
    auto hrep = local_flat_bound_check(*hu, hz, Vec3{0.0, 0.0, 0.0}, 0.5);
    CHECK(hrep.rho == 0.0);
    CHECK(hrep.pass);
}

TEST_CASE("flat local bound for a lifted mode at an edge-far interior point") {
    auto P = std::make_shared<Polytope>(make_unit_square());
    auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.02));
    SquareMode mode = exact_square_mode(2, 1);
    auto f = interpolate(P, mesh,
                         [&](const Vec2& p) { return mode.field->value(p); });
    NodalSet z = extract_nodal_set(*f);

    auto u = lift(mode.field, mode.lambda);
    Vec3 x{0.5, 0.5, 0.0};
    double r = 0.05;
    auto rep = local_flat_bound_check(*u, z, x, r);
    // Z = {x=1/2} through the center: the 3D trace in B_r is a full disk
    CHECK(rep.length == doctest::Approx(kPi * r * r).epsilon(0.02));
    CHECK(rep.rho > 0.0);
    CHECK(rep.pass);
}

TEST_CASE("shell accounting at the reentrant vertex") {
    auto P = std::make_shared<Polytope>(make_l_shape());
    auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.04));
    auto pairs = solve_eigen(*mesh, 2);
    DiscretePlanarField f(P, mesh, pairs[1].node_values);

    auto dec = shell_accounting(*P, f, Vec2{0.0, 0.0}, 1.6);
    CHECK(dec.certificate_ok);
    CHECK(dec.k_max == 3);
    REQUIRE(dec.shells.size() == 3);

    // the antisymmetric mode's nodal line passes through the corner ball
    CHECK(dec.total_length > 0.15);
    CHECK(dec.total_length ==
          doctest::Approx(nodal_measure_ball(dec.nodal, Vec2{0.0, 0.0}, 0.2)).epsilon(1e-12));
    double acc = dec.unresolved_length + dec.outside_length;
    for (const Shell& sh : dec.shells) {
        CHECK(sh.d_hi == doctest::Approx(2.0 * sh.d_lo));
        CHECK(sh.ball_radius > 0.0);
        CHECK(sh.ball_count <= 5000);
        if (sh.nodal_length > 0.0) CHECK(sh.ball_count > 0);
        acc += sh.nodal_length;
    }
    CHECK(acc == doctest::Approx(dec.total_length).epsilon(1e-12));

    // shells are annotated on the segments themselves
    for (const NodalSegment& s : dec.nodal.segments)
        if (s.shell > 0) CHECK((s.midpoint() - Vec2{0.0, 0.0}).norm() <= 0.2 + 1e-12);

    // empty nodal set => all shell lengths zero
    auto ones = interpolate(P, mesh, [](const Vec2&) { return 1.0; });
    auto empty_dec = shell_accounting(*P, *ones, Vec2{0.0, 0.0}, 1.6);
    for (const Shell& sh : empty_dec.shells) CHECK(sh.nodal_length == 0.0);

    // star certificate must hold at the base ball
    CHECK_THROWS_AS(shell_accounting(*P, f, Vec2{0.5, -0.5}, 1.6), Error);
}

TEST_CASE("Yau-scaling survey: analytic square modes and the L-shape") {
    auto P = std::make_shared<Polytope>(make_unit_square());
    auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.015));

    std::vector<EigenPair> fake;
    for (int k = 1; k <= 4; ++k) {
        for (int m = 1; m <= 4; ++m) {
            EigenPair p;
            p.lambda = kPi * kPi * (k * k + m * m);
            p.node_values.resize(mesh->nodes.size());
            for (size_t i = 0; i < mesh->nodes.size(); ++i)
                p.node_values[i] =
                    std::sin(k * kPi * mesh->nodes[i].x) * std::sin(m * kPi * mesh->nodes[i].y);
            fake.push_back(std::move(p));
        }
    }
    std::sort(fake.begin(), fake.end(),
              [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
    for (size_t i = 0; i < fake.size(); ++i) fake[i].index = static_cast<int>(i);

    auto survey = yau_upper_survey(P, mesh, fake);
    REQUIRE(survey.entries.size() == 16);
    for (const YauEntry& e : survey.entries) {
        // lambda = pi^2(k^2+m^2); interior length = (k-1)+(m-1)
        int km = static_cast<int>(std::lround(e.lambda / (kPi * kPi)));
        double best = 1e300, exact_len = 0.0;
        for (int k = 1; k <= 4; ++k)
            for (int m = 1; m <= 4; ++m)
                if (k * k + m * m == km) {
                    exact_len = k + m - 2.0;
                    best = 0.0;
                }
        REQUIRE(best == 0.0);
        if (exact_len == 0.0)
            CHECK(e.length <= 1e-9);
        else
            CHECK(e.length == doctest::Approx(exact_len).epsilon(0.02));
    }
    // sup of (k+m-2)/(pi sqrt(k^2+m^2)) over the sampled family sits at k=m=4
    CHECK(survey.max_ratio == doctest::Approx(6.0 / (kPi * std::sqrt(32.0))).epsilon(0.02));

    // genuine eigenfunctions on the L-shape: bounded ratios
    auto L = std::make_shared<Polytope>(make_l_shape());
    auto lm = std::make_shared<Mesh>(generate_mesh(*L, 0.05));
    auto lp = solve_eigen(*lm, 10);
    auto ls = yau_upper_survey(L, lm, lp);
    CHECK(ls.entries.size() == 10);
    CHECK(ls.max_ratio > 0.0);
    CHECK(ls.max_ratio < 1.0);

    // resolution guard
    auto coarse = std::make_shared<Mesh>(generate_mesh(*P, 0.25));
    auto cp = solve_eigen(*coarse, 5);
    try {
        yau_upper_survey(P, coarse, cp);
        FAIL("expected the resolution guard");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ResolutionGuard);
    }
}

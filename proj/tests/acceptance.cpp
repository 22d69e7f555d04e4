// Acceptance suite: one pass/fail line per criterion, exit code = #failures.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polynodal/doubling.hpp"
#include "polynodal/io.hpp"
#include "polynodal/nodal.hpp"

namespace fs = std::filesystem;
using namespace polynodal;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d %s  %s  (%s)\n", id, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <typename Body>
void criterion(int id, const std::string& name, Body&& body) {
    try {
        auto [pass, detail] = body();
        report(id, name, pass, detail);
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double ols_slope(const std::vector<std::pair<double, double>>& pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = static_cast<double>(pts.size());
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double oracle_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 d = b - a;
    double t = std::clamp((p - a).dot(d) / d.dot(d), 0.0, 1.0);
    return (p - (a + d * t)).norm();
}

// brute-force face-separation constant over sampled edge pairs
double sampling_oracle_c_star(const Polytope& P, int resolution) {
    double cp = std::numeric_limits<double>::infinity();
    double cpp = std::numeric_limits<double>::infinity();
    int m = static_cast<int>(P.facet_count());
    for (int f = 0; f < m; ++f) {
        Vec2 a = P.edge_a(f), b = P.edge_b(f);
        for (int g = 0; g < m; ++g) {
            if (f == g) continue;
            Vec2 c = P.edge_a(g), d = P.edge_b(g);
            bool adjacent = (a - c).norm() < 1e-12 || (a - d).norm() < 1e-12 ||
                            (b - c).norm() < 1e-12 || (b - d).norm() < 1e-12;
            if (adjacent) {
                for (int i = 1; i < resolution; ++i) {
                    double s = static_cast<double>(i) / resolution;
                    Vec2 x = a + (b - a) * s;
                    double dbnd = std::min((x - a).norm(), (x - b).norm());
                    cp = std::min(cp, oracle_segment_distance(x, c, d) / dbnd);
                }
            } else {
                for (int i = 0; i <= resolution; ++i) {
                    double s = static_cast<double>(i) / resolution;
                    Vec2 x = a + (b - a) * s;
                    cpp = std::min(cpp, oracle_segment_distance(x, c, d));
                }
            }
        }
    }
    return std::min(cp, cpp / P.diameter());
}

struct SolvedDomain {
    std::shared_ptr<Polytope> P;
    std::shared_ptr<Mesh> mesh;
    std::vector<EigenPair> pairs;
};

SolvedDomain solve_domain(Polytope poly, double h, int count) {
    SolvedDomain d;
    d.P = std::make_shared<Polytope>(std::move(poly));
    d.mesh = std::make_shared<Mesh>(generate_mesh(*d.P, h));
    d.pairs = solve_eigen(*d.mesh, count);
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "./polynodal";
    const double pi2 = M_PI * M_PI;

    // shared solves, reused across criteria
    SolvedDomain square8 = solve_domain(make_unit_square(), 0.02, 8);
    SolvedDomain square30 = solve_domain(make_unit_square(), 0.03, 30);
    SolvedDomain lshape30 = solve_domain(make_l_shape(), 0.04, 30);

    criterion(1, "square spectrum oracle", [&] {
        double l1 = square8.pairs[0].lambda;
        double l7 = square8.pairs[6].lambda;
        double l8 = square8.pairs[7].lambda;
        double e1 = std::abs(l1 - 2 * pi2) / (2 * pi2);
        double e7 = std::abs(l7 - 13 * pi2) / (13 * pi2);
        double e8 = std::abs(l8 - 13 * pi2) / (13 * pi2);
        bool pass = e1 <= 0.01 && e7 <= 0.01 && e8 <= 0.01;
        return std::pair{pass, "lambda1=" + fmt(l1) + " rel=" + fmt(e1) +
                                   "; degenerate pair rel=" + fmt(e7) + "," + fmt(e8) +
                                   " vs 13pi^2, tol 1%"};
    });

    criterion(2, "square nodal length oracle", [&] {
        auto P = std::make_shared<Polytope>(make_unit_square());
        auto mesh = std::make_shared<Mesh>(generate_mesh(*P, 0.01));
        double worst = 0.0;
        bool pass = true;
        for (int k = 1; k <= 4; ++k) {
            for (int m = 1; m <= 4; ++m) {
                std::vector<double> vals(mesh->nodes.size());
                for (size_t i = 0; i < vals.size(); ++i)
                    vals[i] = std::sin(k * M_PI * mesh->nodes[i].x) *
                              std::sin(m * M_PI * mesh->nodes[i].y);
                DiscretePlanarField f(P, mesh, std::move(vals));
                double len = nodal_measure(extract_nodal_set(f));
                double expected = (k - 1) + (m - 1);
                double err = expected > 0 ? std::abs(len - expected) / expected : len;
                worst = std::max(worst, err);
                if (err > 0.02) pass = false;
            }
        }
        return std::pair{pass, "16 modes, worst relative length error " + fmt(worst) + ", tol 2%"};
    });

    criterion(3, "nodal length scaling", [&] {
        YauSurvey yl = yau_upper_survey(lshape30.P, lshape30.mesh, lshape30.pairs);
        YauSurvey ys = yau_upper_survey(square30.P, square30.mesh, square30.pairs);
        double analytic = std::sqrt(2.0) / M_PI;
        bool l_ok = std::isfinite(yl.max_ratio) && yl.max_ratio > 0 && yl.trend_slope <= 0.05;
        bool s_ok = std::isfinite(ys.max_ratio) && ys.trend_slope <= 0.05 &&
                    std::abs(ys.max_ratio - analytic) <= 0.02 * analytic;
        return std::pair{l_ok && s_ok,
                         "lshape max_ratio=" + fmt(yl.max_ratio) + " slope=" + fmt(yl.trend_slope) +
                             "; square max_ratio=" + fmt(ys.max_ratio) +
                             " slope=" + fmt(ys.trend_slope) + " vs sqrt2/pi=" + fmt(analytic) +
                             " tol 2%, slope guard 0.05"};
    });

    criterion(4, "doubling monotonicity and four-sphere", [&] {
        struct Probe {
            std::shared_ptr<Field> u;
            Vec3 center;
            std::vector<double> radii;
        };
        std::vector<Probe> probes;

        // lifted separable modes, exact eigenfunctions of the square
        Polytope sq = make_unit_square();
        std::vector<Vec3> mode_centers = {Vec3{{0.0, 0.0}, 0.0}, Vec3{{1.0, 1.0}, 0.0},
                                          Vec3{{0.5, 0.0}, 0.0}};
        auto mode_radii = geometric_radii(0.05, 0.2, std::pow(2.0, 0.25));
        for (int k = 1; k <= 4; ++k)
            for (int m = 1; m <= 4; ++m) {
                SquareMode mode = exact_square_mode(k, m);
                auto u = lift(mode.field, mode.lambda);
                for (const Vec3& c : mode_centers) probes.push_back({u, c, mode_radii});
            }
        // homogeneous harmonics about an interior center
        Polytope box = Polytope::polygon({{-4, -4}, {4, -4}, {4, 4}, {-4, 4}});
        // radii keep the smallest mass (k=5, r^12 decay) above the noise floor
        auto harm_radii = geometric_radii(0.5, 1.0, std::pow(2.0, 0.25));
        for (int k : {1, 2, 3, 5}) {
            auto u = std::make_shared<PlanarAdapterField>(harmonic_polynomial_field(k, box));
            probes.push_back({u, Vec3{{0.0, 0.0}, 0.0}, harm_radii});
        }
        // degree-1 harmonic vanishing on one facet; balls must stay clear of
        // the corners where the vanishing hypothesis breaks (2*2r < 0.5)
        Polytope rect = make_rectangle(2.0, 1.0);
        probes.push_back({std::make_shared<PlanarAdapterField>(harmonic_polynomial_field(1, rect)),
                          Vec3{{0.0, 0.5}, 0.0}, geometric_radii(0.05, 0.12, std::pow(2.0, 0.25))});
        // discrete lifted ground states at every vertex
        for (const SolvedDomain* d : {&square30, &lshape30}) {
            auto u = lift(eigen_field(d->P, d->mesh, d->pairs.front()), d->pairs.front().lambda);
            double diam = d->P->diameter();
            auto radii = geometric_radii(std::max(0.16, 0.03 * diam), 0.12 * diam);
            for (size_t i = 0; i < d->P->vertex_count(); ++i)
                probes.push_back({u, Vec3{d->P->vertex(static_cast<int>(i)), 0.0}, radii});
        }

        size_t certified = 0, violations = 0, fs_checked = 0, fs_failed = 0;
        double worst = 0.0;
        for (const Probe& p : probes) {
            DoublingProfile prof = frequency_profile(*p.u, p.center, p.radii);
            if (!prof.certificate_ok) continue;
            ++certified;
            MonotonicityReport m = monotonicity_check(prof, 1e-3);
            worst = std::max({worst, m.worst_n_violation, m.worst_beta_violation});
            if (!m.pass) ++violations;
            double r0 = p.radii.front();
            for (double t : {2.0 * r0, 3.0 * r0}) {
                FourSphereReport f4 = four_sphere_check(*p.u, p.center, r0, t);
                if (!f4.certificate_ok) continue;
                ++fs_checked;
                if (!f4.holds) ++fs_failed;
            }
        }
        bool pass = certified >= 50 && violations == 0 && fs_checked > 0 && fs_failed == 0;
        return std::pair{pass, fmt(static_cast<double>(certified)) +
                                   " certified profiles (need >=50), violations beyond 1e-3: " +
                                   fmt(static_cast<double>(violations)) + " (worst " + fmt(worst) +
                                   "), four-sphere " + fmt(static_cast<double>(fs_checked)) +
                                   " pairs, failed " + fmt(static_cast<double>(fs_failed))};
    });

    criterion(5, "homogeneous calibration", [&] {
        Polytope box = Polytope::polygon({{-4, -4}, {4, -4}, {4, 4}, {-4, 4}});
        auto radii = geometric_radii(0.5, 1.0, std::pow(2.0, 0.25));
        double worst_beta = 0.0, worst_n = 0.0;
        for (int k : {1, 2, 3, 5}) {
            PlanarAdapterField u(harmonic_polynomial_field(k, box));
            DoublingProfile prof = frequency_profile(u, Vec3{{0.0, 0.0}, 0.0}, radii);
            for (size_t i = 0; i < prof.radii.size(); ++i) {
                worst_beta = std::max(worst_beta, std::abs(prof.beta[i] - k));
                worst_n = std::max(worst_n, std::abs(prof.N[i] - (2.0 * k + 2.0)));
            }
        }
        bool pass = worst_beta <= 1e-6 && worst_n <= 1e-6;
        return std::pair{pass, "k in {1,2,3,5}: max |beta-k|=" + fmt(worst_beta) +
                                   ", max |N-(2k+2)|=" + fmt(worst_n) + ", tol 1e-6"};
    });

    criterion(6, "geometry constants and star radius bounds", [&] {
        Polytope sq = make_unit_square();
        double oracle = sampling_oracle_c_star(sq, 10000);
        double cs = sq.c_star();
        bool cs_ok = std::abs(cs - oracle) <= 1e-6 &&
                     std::abs(cs - 1.0 / std::sqrt(2.0)) <= 1e-6;

        Polytope L = make_l_shape();
        double msr_reentrant = max_star_radius(L, {0.0, 0.0}).value;
        bool msr_ok = std::abs(msr_reentrant - 1.0) <= 1e-6;

        size_t violations = 0;
        std::mt19937_64 rng(2026);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (const Polytope& P : {make_unit_square(), make_regular_polygon(5, 1.0), make_l_shape()}) {
            double c = P.c_star();
            for (int i = 0; i < 1000; ++i) {
                Vec2 b = P.boundary_point_at(unif(rng) * P.perimeter());
                Vec2 x = b + (P.interior_point() - b) * (0.05 * unif(rng));
                if (!P.contains(x)) continue;
                MsrResult msr = max_star_radius(P, x);
                if (msr_lower_bounds(P, x, c).max_applicable() >
                    msr.value + 1e-6 * P.diameter())
                    ++violations;
            }
        }
        bool pass = cs_ok && msr_ok && violations == 0;
        return std::pair{pass, "square c*=" + fmt(cs) + " (oracle " + fmt(oracle) +
                                   ", tol 1e-6); lshape reentrant-vertex star radius=" +
                                   fmt(msr_reentrant) + " vs pinned 1 (tol 1e-6); bound "
                                   "dominance violations over 3x1000 points: " +
                                   fmt(static_cast<double>(violations))};
    });

    criterion(7, "boundary covers", [&] {
        bool pass = true;
        std::string detail;
        for (const Polytope& P : {make_unit_square(), make_regular_polygon(5, 1.0), make_l_shape()}) {
            double r0 = 0.5 * P.vertex_radius_r0();
            StarCover cover = boundary_cover(P, r0);
            CoverReport rep = cover_verify(P, cover, 100000);
            pass = pass && rep.ok && rep.gaps == 0 && rep.certificate_failures == 0;
            if (!detail.empty()) detail += "; ";
            detail += fmt(static_cast<double>(cover.balls.size())) + " balls, gaps " +
                      fmt(static_cast<double>(rep.gaps)) + ", cert failures " +
                      fmt(static_cast<double>(rep.certificate_failures));
        }
        return std::pair{pass, detail + " (1e5 samples each)"};
    });

    criterion(8, "doubling propagation along curves", [&] {
        size_t admissible = 0, failed = 0, rejected = 0;
        double worst = 0.0;
        for (int km : {11, 21}) {
            SquareMode mode = exact_square_mode(km / 10, km % 10);
            auto u = lift(mode.field, mode.lambda);
            Polytope sq = make_unit_square();
            for (size_t i = 0; i < sq.vertex_count(); ++i) {
                Vec2 v = sq.vertex(static_cast<int>(i));
                Vec2 e = sq.vertex(static_cast<int>((i + 1) % sq.vertex_count())) - v;
                e = e * (1.0 / e.norm());
                CurveSpec trivial{{Vec3{v, 0.0}}, 0.2, 0.8, 4.0, 0.0};
                CurveSpec along{{Vec3{v, 0.0}, Vec3{v + e * 0.15, 0.0}, Vec3{v + e * 0.3, 0.0}},
                                0.1, 0.8, 8.0, 3.0};
                for (const CurveSpec& curve : {trivial, along}) {
                    PropagationReport rep = propagation_check(*u, curve);
                    ++admissible;
                    worst = std::max(worst, rep.c_emp / rep.bound);
                    if (!rep.holds) ++failed;
                }
            }
        }
        // hypothesis gating: oversized r and a curve whose 4r-balls reach the
        // reentrant notch must both be rejected
        {
            SquareMode mode = exact_square_mode(1, 1);
            auto u = lift(mode.field, mode.lambda);
            CurveSpec bad_r{{Vec3{{0.0, 0.0}, 0.0}}, 0.3, 0.8, 4.0, 0.0};
            try {
                propagation_check(*u, bad_r);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::HypothesisFailure) ++rejected;
            }
        }
        {
            auto u = lift(eigen_field(lshape30.P, lshape30.mesh, lshape30.pairs.front()),
                          lshape30.pairs.front().lambda);
            CurveSpec notch{{Vec3{{0.05, -0.15}, 0.0}, Vec3{{0.1, -0.1}, 0.0}}, 0.25, 1.6, 8.0, 1.0};
            try {
                propagation_check(*u, notch);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::HypothesisFailure) ++rejected;
            }
        }
        bool pass = admissible >= 10 && failed == 0 && rejected == 2;
        return std::pair{pass, fmt(static_cast<double>(admissible)) +
                                   " admissible curves (need >=10), bound failures " +
                                   fmt(static_cast<double>(failed)) + ", worst C_emp/bound " +
                                   fmt(worst) + ", hypothesis rejections " +
                                   fmt(static_cast<double>(rejected)) + "/2"};
    });

    criterion(9, "eigenfunction doubling survey", [&] {
        bool pass = true;
        std::string detail;
        for (const SolvedDomain* d : {&square30, &lshape30}) {
            std::vector<Vec3> centers;
            for (size_t i = 0; i < d->P->vertex_count(); ++i)
                centers.push_back(Vec3{d->P->vertex(static_cast<int>(i)), 0.0});
            DoublingSurvey s = eigen_doubling_survey(d->P, d->mesh, d->pairs, centers, 0.25);
            double sup = 0.0;
            std::vector<std::pair<double, double>> pts;
            for (const auto& [lam, ratio] : s.sup_ratio) {
                sup = std::max(sup, ratio);
                if (ratio > 0) pts.push_back({std::log(lam), std::log(ratio)});
            }
            size_t noise = 0;
            for (const SurveyEntry& e : s.entries)
                if (e.noise) ++noise;
            double slope = pts.size() > 1 ? ols_slope(pts) : 0.0;
            pass = pass && std::isfinite(sup) && sup > 0 && slope <= 0.05 && noise == 0;
            if (!detail.empty()) detail += "; ";
            detail += "sup=" + fmt(sup) + " slope=" + fmt(slope);
        }
        return std::pair{pass, detail + " over 30 eigenvalues each, r=0.25, slope guard 0.05"};
    });

    criterion(10, "deterministic reports", [&] {
        fs::path base = fs::temp_directory_path() / "polynodal-acceptance";
        fs::remove_all(base);
        auto run = [&](const std::string& out) {
            std::string cmd = cli + " verify --polytope square --h 0.05 --count 6 --seed 31415" +
                              " --out " + (base / out).string() + " >/dev/null 2>&1";
            return std::system(cmd.c_str());
        };
        int rc1 = run("a"), rc2 = run("b");
        auto slurp = [&](const std::string& out) {
            std::ifstream is(base / out / "report.json", std::ios::binary);
            std::ostringstream os;
            os << is.rdbuf();
            return os.str();
        };
        std::string a = slurp("a"), b = slurp("b");
        bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
        return std::pair{pass, "exit codes " + fmt(rc1) + "," + fmt(rc2) + "; report bytes " +
                                   (a == b ? "identical" : "differ") + " (" +
                                   fmt(static_cast<double>(a.size())) + " bytes)"};
    });

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures;
}

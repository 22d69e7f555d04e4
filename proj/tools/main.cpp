#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polynodal/doubling.hpp"
#include "polynodal/io.hpp"
#include "polynodal/nodal.hpp"
#include "polynodal/report.hpp"

namespace fs = std::filesystem;
using namespace polynodal;

namespace {

struct RunConfig {
    std::string polytope = "square";
    fs::path out = "out";
    uint64_t seed = 9001;
    int jobs = 1;  // reserved: pipeline stages are sequential and deterministic
    double h = 0.05;
    int count = 6;
    double r0 = 0.0;  // 0 = derive from the polygon
    double tol = -1.0;
    size_t samples = 20000;
    double r_min = 0.0, r_max = 0.0;  // 0 = derive from the polygon
    double grid_ratio = kDefaultGridRatio;
    double r_survey = 0.0;
    bool grade_corners = false;
    std::vector<double> center;  // x y t
    std::string inject_fault;
};

RunConfig load_config(int argc, char** argv) {
    RunConfig c;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) != "--config") continue;
        std::ifstream is(argv[i + 1]);
        if (!is) throw Error(ErrorCode::IoError, std::string("cannot open ") + argv[i + 1]);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(is);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::IoError, std::string(argv[i + 1]) + ": " + e.what());
        }
        c.polytope = j.value("polytope", c.polytope);
        c.out = fs::path(j.value("out", c.out.string()));
        c.seed = j.value("seed", c.seed);
        c.h = j.value("h", c.h);
        c.count = j.value("count", c.count);
        c.r0 = j.value("r0", c.r0);
        c.tol = j.value("tol", c.tol);
        c.samples = j.value("samples", c.samples);
        c.r_min = j.value("r_min", c.r_min);
        c.r_max = j.value("r_max", c.r_max);
        c.grid_ratio = j.value("grid_ratio", c.grid_ratio);
        c.r_survey = j.value("r", c.r_survey);
        c.grade_corners = j.value("grade_corners", c.grade_corners);
        if (j.contains("center")) c.center = j["center"].get<std::vector<double>>();
    }
    return c;
}

double default_r0(const Polytope& P) { return 0.5 * P.vertex_radius_r0(); }

Vec3 profile_center(const RunConfig& c, const Polytope& P) {
    if (c.center.size() == 3) return {c.center[0], c.center[1], c.center[2]};
    if (c.center.size() == 2) return {c.center[0], c.center[1], 0.0};
    return Vec3{P.interior_point(), 0.0};
}

std::vector<double> radius_grid(const RunConfig& c, const Polytope& P) {
    double rmin = c.r_min > 0 ? c.r_min : 0.02 * P.diameter();
    double rmax = c.r_max > 0 ? c.r_max : 0.1 * P.diameter();
    return geometric_radii(rmin, rmax, c.grid_ratio);
}

void emit(const RunConfig& c, const std::string& name, const ordered_json& j) {
    write_text(c.out / name, j.dump(2) + "\n");
    std::cerr << "wrote " << (c.out / name).string() << "\n";
}

// ---------------------------------------------------------------------------

int cmd_geometry(const RunConfig& c) {
    Polytope P = resolve_polytope(c.polytope);
    ordered_json j;
    j["polytope"] = c.polytope;
    j["hash"] = polytope_hash(P);
    j["diameter"] = P.diameter();
    j["area"] = P.signed_area();
    j["perimeter"] = P.perimeter();
    const FaceLattice& lat = P.face_lattice();
    j["faces"] = {{"vertices", lat.faces(0).size()}, {"facets", lat.faces(1).size()}};
    FaceDistanceConstant fd = P.face_distance_constant();
    j["c_adjacent"] = fd.c_adjacent;
    j["c_disjoint"] = fd.c_disjoint;
    j["c_star"] = P.c_star();
    j["vertex_radius_r0"] = P.vertex_radius_r0();
    j["max_chart_lipschitz"] = P.max_chart_lipschitz();
    j["chart_working_constant"] = chart_working_constant(P);

    // sampled MSR dominance: every lower bound must sit below the measured R*
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    size_t n = std::min<size_t>(c.samples, 200), violations = 0;
    double worst_margin = 1e300;
    double cs = P.c_star();
    for (size_t i = 0; i < n; ++i) {
        Vec2 b = P.boundary_point_at(unif(rng) * P.perimeter());
        Vec2 x = b + (P.interior_point() - b) * (0.02 * unif(rng));
        if (!P.contains(x)) continue;
        MsrBounds bounds = msr_lower_bounds(P, x, cs);
        MsrResult msr = max_star_radius(P, x);
        double margin = msr.value - bounds.max_applicable();
        worst_margin = std::min(worst_margin, margin);
        if (margin < -1e-6 * P.diameter()) ++violations;
    }
    j["msr_dominance"] = {{"samples", n}, {"violations", violations}, {"worst_margin", worst_margin}};
    emit(c, "geometry.json", j);
    return violations == 0 ? 0 : 1;
}

int cmd_cover(const RunConfig& c) {
    Polytope P = resolve_polytope(c.polytope);
    double r0 = c.r0 > 0 ? c.r0 : default_r0(P);
    StarCover cover = boundary_cover(P, r0);
    CoverReport rep = cover_verify(P, cover, c.samples);
    ordered_json j = cover_json(cover, rep);
    j["polytope"] = c.polytope;
    emit(c, "cover.json", j);
    write_text(c.out / "cover.svg", svg_overlay(P, nullptr, &cover));
    return rep.ok ? 0 : 1;
}

int cmd_solve(const RunConfig& c) {
    Polytope P = resolve_polytope(c.polytope);
    fs::path cache = cache_directory(c.out);
    MeshOptions opt;
    opt.grade_corners = c.grade_corners;
    bool mesh_hit = false, eigen_hit = false;
    Mesh mesh = cached_mesh(P, c.h, opt, cache, &mesh_hit);
    auto pairs = cached_eigen(P, mesh, c.h, c.count, cache, &eigen_hit);
    ordered_json j;
    j["polytope"] = c.polytope;
    j["h"] = c.h;
    j["nodes"] = mesh.nodes.size();
    j["triangles"] = mesh.triangles.size();
    j["min_angle_deg"] = mesh.min_angle_deg;
    j["cache"] = {{"mesh_hit", mesh_hit}, {"eigen_hit", eigen_hit}};
    ordered_json arr = ordered_json::array();
    for (const EigenPair& p : pairs)
        arr.push_back({{"index", p.index},
                       {"lambda", p.lambda},
                       {"residual", p.residual},
                       {"cluster", p.cluster}});
    j["eigenpairs"] = std::move(arr);
    emit(c, "spectrum.json", j);
    return 0;
}

int cmd_doubling(const RunConfig& c) {
    Polytope Pv = resolve_polytope(c.polytope);
    auto P = std::make_shared<Polytope>(Pv);
    fs::path cache = cache_directory(c.out);
    auto mesh = std::make_shared<Mesh>(cached_mesh(*P, c.h, {}, cache));
    auto pairs = cached_eigen(*P, *mesh, c.h, c.count, cache);

    auto u = lift(eigen_field(P, mesh, pairs.front()), pairs.front().lambda);
    Vec3 x = profile_center(c, *P);
    auto grid = radius_grid(c, *P);
    DoublingProfile prof = frequency_profile(*u, x, grid);
    MonotonicityReport mono = monotonicity_check(prof);
    write_text(c.out / "profile.csv", profile_csv(prof));

    std::vector<Vec3> centers;
    for (size_t i = 0; i < P->vertex_count(); ++i)
        centers.push_back(Vec3{P->vertex(static_cast<int>(i)), 0.0});
    double r = c.r_survey > 0 ? c.r_survey : 0.1 * P->diameter();
    DoublingSurvey survey = eigen_doubling_survey(P, mesh, pairs, centers, r);
    write_text(c.out / "doubling_survey.csv", doubling_survey_csv(survey));

    ordered_json j;
    j["polytope"] = c.polytope;
    j["profile"] = profile_json(prof);
    j["monotonicity"] = {{"certificate_ok", mono.certificate_ok},
                         {"worst_n_violation", mono.worst_n_violation},
                         {"worst_beta_violation", mono.worst_beta_violation},
                         {"tolerance", mono.tolerance},
                         {"pass", mono.pass}};
    j["survey"] = doubling_survey_json(survey);
    emit(c, "doubling.json", j);
    return mono.certificate_ok && !mono.pass ? 1 : 0;
}

int cmd_nodal(const RunConfig& c) {
    Polytope Pv = resolve_polytope(c.polytope);
    auto P = std::make_shared<Polytope>(Pv);
    fs::path cache = cache_directory(c.out);
    auto mesh = std::make_shared<Mesh>(cached_mesh(*P, c.h, {}, cache));
    auto pairs = cached_eigen(*P, *mesh, c.h, c.count, cache);

    DiscretePlanarField f(P, mesh, pairs.back().node_values);
    NodalSet z = extract_nodal_set(f);
    write_text(c.out / "segments.csv", segments_csv(z));
    write_text(c.out / "nodal.svg", svg_overlay(*P, &z));

    YauSurvey survey = yau_upper_survey(P, mesh, pairs);
    write_text(c.out / "yau_survey.csv", survey_csv(survey));

    ordered_json j;
    j["polytope"] = c.polytope;
    j["mode_index"] = pairs.back().index;
    j["nodal_length"] = nodal_measure(z);
    j["degenerate_triangles"] = z.degenerate_triangles.size();
    j["survey"] = yau_survey_json(survey);

    // dyadic shell accounting at the first vertex with a certified base ball
    double r0 = c.r0 > 0 ? c.r0 : 2.0 * default_r0(*P);
    for (size_t i = 0; i < P->vertex_count(); ++i) {
        Vec2 v = P->vertex(static_cast<int>(i));
        if (!star_certificate(*P, v, r0).star_shaped) continue;
        ShellDecomposition dec = shell_accounting(*P, f, v, r0);
        j["shells"] = shells_json(dec);
        break;
    }
    emit(c, "nodal.json", j);
    return 0;
}

int cmd_verify(const RunConfig& c) {
    Polytope Pv = resolve_polytope(c.polytope);
    auto P = std::make_shared<Polytope>(Pv);
    VerificationReport rep;
    rep.polytope = c.polytope;
    rep.seed = c.seed;

    auto guard = [&](const std::string& name, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            rep.add({name, "fail", e.what(), {}});
        }
    };

    // geometry: face-separation constant and MSR dominance
    guard("geometry-face-separation", [&] {
        double cs = P->c_star();
        CheckRecord r{"geometry-face-separation", cs > 0 ? "pass" : "fail", "", {{"c_star", cs}}};
        if (c.polytope == "square") {
            double oracle = 1.0 / std::sqrt(2.0);
            r.values["oracle"] = oracle;
            r.values["tolerance"] = 1e-6;
            if (std::abs(cs - oracle) > 1e-6) {
                r.status = "fail";
                r.reason = "square face-separation constant mismatch";
            }
        }
        rep.add(std::move(r));
    });
    guard("msr-dominance", [&] {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double cs = P->c_star();
        size_t violations = 0, n = 100;
        for (size_t i = 0; i < n; ++i) {
            Vec2 b = P->boundary_point_at(unif(rng) * P->perimeter());
            Vec2 x = b + (P->interior_point() - b) * (0.02 * unif(rng));
            if (!P->contains(x)) continue;
            if (msr_lower_bounds(*P, x, cs).max_applicable() >
                max_star_radius(*P, x).value + 1e-6 * P->diameter())
                ++violations;
        }
        rep.add({"msr-dominance",
                 violations == 0 ? "pass" : "fail",
                 violations ? "lower bound exceeded measured radius" : "",
                 {{"samples", n}, {"violations", violations}}});
    });

    // boundary cover construction + verification (fault injection point)
    guard("cover-verification", [&] {
        double r0 = c.r0 > 0 ? c.r0 : default_r0(*P);
        StarCover cover = boundary_cover(*P, r0);
        if (c.inject_fault == "shrunken-cover")
            for (CoverBall& b : cover.balls) b.covering_radius *= 0.2;
        CoverReport cr = cover_verify(*P, cover, c.samples);
        rep.add({"cover-verification",
                 cr.ok ? "pass" : "fail",
                 cr.ok ? "" : "coverage gaps or failed certificates",
                 {{"r0", r0},
                  {"balls", cover.balls.size()},
                  {"samples", cr.samples},
                  {"gaps", cr.gaps},
                  {"certificate_failures", cr.certificate_failures}}});
    });

    // spectrum
    fs::path cache = cache_directory(c.out);
    std::shared_ptr<Mesh> mesh;
    std::vector<EigenPair> pairs;
    guard("spectrum-residuals", [&] {
        mesh = std::make_shared<Mesh>(cached_mesh(*P, c.h, {}, cache));
        pairs = cached_eigen(*P, *mesh, c.h, c.count, cache);
        double worst = 0.0;
        for (const EigenPair& p : pairs) worst = std::max(worst, p.residual);
        CheckRecord r{"spectrum-residuals",
                      worst <= 1e-8 ? "pass" : "fail",
                      "",
                      {{"worst_residual", worst}, {"tolerance", 1e-8}}};
        if (c.polytope == "square") {
            double l1 = pairs.front().lambda, oracle = 2.0 * M_PI * M_PI;
            r.values["lambda1"] = l1;
            r.values["oracle"] = oracle;
            if (std::abs(l1 - oracle) > 0.01 * oracle) {
                r.status = "fail";
                r.reason = "ground-state eigenvalue off by more than 1%";
            }
        }
        rep.add(std::move(r));
    });
    if (pairs.empty()) {
        rep.add({"doubling-monotonicity", "skipped", "no spectrum available", {}});
        rep.add({"four-sphere", "skipped", "no spectrum available", {}});
        rep.add({"propagation", "skipped", "no spectrum available", {}});
        rep.add({"doubling-survey", "skipped", "no spectrum available", {}});
        rep.add({"nodal-scaling", "skipped", "no spectrum available", {}});
        rep.add({"flat-bound-guard", "skipped", "no spectrum available", {}});
    } else {
        auto u = lift(eigen_field(P, mesh, pairs.front()), pairs.front().lambda);
        double diam = P->diameter();
        // discretization error of the P1 eigenmode propagates into mass
        // ratios at roughly h^2 * lambda relative size
        double disc_tol = std::max(1e-3, c.h * c.h * pairs.front().lambda);
        double r_lo = std::max(4.0 * c.h, 0.03 * diam);
        double r_hi = std::max(2.0 * r_lo, 0.12 * diam);

        guard("doubling-monotonicity", [&] {
            size_t certified = 0, violations = 0;
            double worst = 0.0;
            auto grid = geometric_radii(r_lo, r_hi, c.grid_ratio);
            for (size_t i = 0; i < P->vertex_count(); ++i) {
                DoublingProfile prof =
                    frequency_profile(*u, Vec3{P->vertex(static_cast<int>(i)), 0.0}, grid);
                if (!prof.certificate_ok) continue;
                ++certified;
                MonotonicityReport m = monotonicity_check(prof, disc_tol);
                worst = std::max({worst, m.worst_n_violation, m.worst_beta_violation});
                if (!m.pass) ++violations;
            }
            rep.add({"doubling-monotonicity",
                     certified > 0 && violations == 0 ? "pass" : "fail",
                     certified == 0 ? "no certified profile centers" : "",
                     {{"certified_profiles", certified},
                      {"violations", violations},
                      {"worst_violation", worst},
                      {"tolerance", disc_tol}}});
        });

        guard("four-sphere", [&] {
            size_t checked = 0, failed = 0;
            for (size_t i = 0; i < P->vertex_count(); ++i) {
                Vec3 x{P->vertex(static_cast<int>(i)), 0.0};
                FourSphereReport fs4 = four_sphere_check(*u, x, r_lo, 2.0 * r_lo, disc_tol);
                if (!fs4.certificate_ok) continue;
                ++checked;
                if (!fs4.holds) ++failed;
            }
            rep.add({"four-sphere",
                     checked > 0 && failed == 0 ? "pass" : "fail",
                     checked == 0 ? "no certified centers" : "",
                     {{"checked", checked}, {"failed", failed}}});
        });

        guard("propagation", [&] {
            size_t admissible = 0, failed = 0;
            double worst_ratio = 0.0;
            for (size_t i = 0; i < P->vertex_count(); ++i) {
                CurveSpec curve;
                curve.vertices = {Vec3{P->vertex(static_cast<int>(i)), 0.0}};
                curve.R = 0.3 * diam;
                curve.r = 0.25 * curve.R;
                curve.c1 = 4.0;
                curve.c2 = 0.0;
                try {
                    PropagationReport pr = propagation_check(*u, curve);
                    ++admissible;
                    worst_ratio = std::max(worst_ratio, pr.c_emp);
                    if (!pr.holds) ++failed;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::HypothesisFailure &&
                        e.code() != ErrorCode::NoiseFloor)
                        throw;
                }
            }
            rep.add({"propagation",
                     admissible > 0 && failed == 0 ? "pass" : "fail",
                     admissible == 0 ? "no admissible curves" : "",
                     {{"admissible", admissible},
                      {"failed", failed},
                      {"worst_c_emp", worst_ratio},
                      {"bound", 3.0}}});
        });

        guard("doubling-survey", [&] {
            std::vector<Vec3> centers;
            for (size_t i = 0; i < P->vertex_count(); ++i)
                centers.push_back(Vec3{P->vertex(static_cast<int>(i)), 0.0});
            DoublingSurvey s = eigen_doubling_survey(P, mesh, pairs, centers,
                                                     c.r_survey > 0 ? c.r_survey : 0.1 * diam);
            double sup = 0.0;
            for (const auto& [lambda, ratio] : s.sup_ratio) sup = std::max(sup, ratio);
            write_text(c.out / "doubling_survey.csv", doubling_survey_csv(s));
            rep.add({"doubling-survey",
                     sup > 0.0 && sup < 100.0 ? "pass" : "fail",
                     "",
                     {{"sup_ratio", sup}, {"bound", 100.0}}});
        });

        guard("nodal-scaling", [&] {
            YauSurvey s = yau_upper_survey(P, mesh, pairs);
            write_text(c.out / "yau_survey.csv", survey_csv(s));
            bool ok = s.max_ratio < 1.5 && (pairs.size() < 10 || s.trend_slope <= 0.05);
            rep.add({"nodal-scaling",
                     ok ? "pass" : "fail",
                     "",
                     {{"max_ratio", s.max_ratio},
                      {"trend_slope", s.trend_slope},
                      {"eigenpairs", pairs.size()}}});
        });

        guard("flat-bound-guard", [&] {
            // first excited mode: nontrivial nodal set, moderate lift growth
            const EigenPair& mode = pairs.size() > 1 ? pairs[1] : pairs.front();
            DiscretePlanarField f(P, mesh, mode.node_values);
            NodalSet z = extract_nodal_set(f);
            auto um = lift(eigen_field(P, mesh, mode), mode.lambda);
            std::vector<Vec2> candidates{P->interior_point()};
            for (size_t i = 0; i < P->vertex_count(); ++i)
                candidates.push_back((P->interior_point() + P->vertex(static_cast<int>(i))) * 0.5);
            std::string last_reason = "no candidate center qualified";
            for (const Vec2& xi : candidates) {
                double r = 0.12 * P->skeleton_distance(xi, 0);
                if (r <= 0) continue;
                try {
                    FlatBoundReport fb = local_flat_bound_check(*um, z, Vec3{xi, 0.0}, r);
                    rep.add({"flat-bound-guard",
                             fb.pass ? "pass" : "fail",
                             "",
                             {{"center", {xi.x, xi.y}},
                              {"rho", fb.rho},
                              {"rho_max", fb.rho_max},
                              {"N_4r", fb.n_4r}}});
                    return;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoiseFloor &&
                        e.code() != ErrorCode::FlatnessViolation)
                        throw;
                    last_reason = e.what();
                }
            }
            rep.add({"flat-bound-guard", "skipped", last_reason, {}});
        });
    }

    emit(c, "report.json", rep.to_json());
    return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        RunConfig cfg = load_config(argc, argv);
        CLI::App app{"nodal-set verification pipeline for planar polytopes"};
        app.require_subcommand(1);
        app.set_help_flag("--help", "print this help message and exit");

        std::string config_path;
        app.add_option("--config", config_path, "JSON configuration file");
        app.add_option("--out", cfg.out, "output directory");
        app.add_option("--seed", cfg.seed, "deterministic sampling seed");
        app.add_option("--jobs", cfg.jobs, "worker count (reserved; stages are sequential)");

        auto add_common = [&](CLI::App* sub) {
            sub->set_help_flag("--help", "print this help message and exit");
            sub->fallthrough();  // let global flags (--out, --seed, ...) appear anywhere
            sub->add_option("--polytope", cfg.polytope,
                            "square|rectangle|lshape|tshape|pentagon or a JSON path");
        };

        CLI::App* geo = app.add_subcommand("geometry", "face lattice, separation constants, MSR");
        add_common(geo);
        geo->add_option("--samples", cfg.samples, "boundary sample count");
        geo->add_option("--tol", cfg.tol, "tolerance override");

        CLI::App* cover = app.add_subcommand("cover", "boundary cover construction and audit");
        add_common(cover);
        cover->add_option("--r0", cfg.r0, "cover scale");
        cover->add_option("--samples", cfg.samples, "verification sample count");

        CLI::App* solve = app.add_subcommand("solve", "mesh and Dirichlet eigenpairs (cached)");
        add_common(solve);
        solve->add_option("--h", cfg.h, "target mesh size");
        solve->add_option("--count", cfg.count, "number of eigenpairs");
        solve->add_flag("--grade-corners", cfg.grade_corners, "grade the mesh toward reflex corners");

        CLI::App* dbl = app.add_subcommand("doubling", "frequency profiles and doubling surveys");
        add_common(dbl);
        dbl->add_option("--h", cfg.h, "target mesh size");
        dbl->add_option("--count", cfg.count, "number of eigenpairs");
        dbl->add_option("--center", cfg.center, "profile center x y t")->expected(2, 3);
        dbl->add_option("--r-min", cfg.r_min, "smallest profile radius");
        dbl->add_option("--r-max", cfg.r_max, "largest profile radius");
        dbl->add_option("--grid-ratio", cfg.grid_ratio, "geometric radius ratio");
        dbl->add_option("--r", cfg.r_survey, "survey ball radius");

        CLI::App* nodal = app.add_subcommand("nodal", "nodal extraction, shells, scaling survey");
        add_common(nodal);
        nodal->add_option("--h", cfg.h, "target mesh size");
        nodal->add_option("--count", cfg.count, "number of eigenpairs");
        nodal->add_option("--r0", cfg.r0, "shell base scale");

        CLI::App* verify = app.add_subcommand("verify", "run every check and write report.json");
        add_common(verify);
        verify->add_option("--h", cfg.h, "target mesh size");
        verify->add_option("--count", cfg.count, "number of eigenpairs");
        verify->add_option("--samples", cfg.samples, "cover verification samples");
        verify->add_option("--r0", cfg.r0, "cover scale");
        verify->add_option("--inject-fault", cfg.inject_fault,
                           "fault injection for pipeline testing (shrunken-cover)");

        CLI11_PARSE(app, argc, argv);

        if (geo->parsed()) return cmd_geometry(cfg);
        if (cover->parsed()) return cmd_cover(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        if (dbl->parsed()) return cmd_doubling(cfg);
        if (nodal->parsed()) return cmd_nodal(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

#include "polynodal/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

namespace polynodal {

namespace {

long double orient_ld(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y) -
           (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
}

// p strictly inside the circumcircle of CCW triangle (a,b,c)
bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    long double ax = a.x - p.x, ay = a.y - p.y;
    long double bx = b.x - p.x, by = b.y - p.y;
    long double cx = c.x - p.x, cy = c.y - p.y;
    long double det = (ax * ax + ay * ay) * (bx * cy - by * cx) -
                      (bx * bx + by * by) * (ax * cy - ay * cx) +
                      (cx * cx + cy * cy) * (ax * by - ay * bx);
    return det > 0.0L;
}

struct DTri {
    std::array<int, 3> v;    // CCW
    std::array<int, 3> adj;  // neighbor across edge (v[i], v[i+1]), -1 if none
    bool alive = true;
};

class BowyerWatson {
public:
    explicit BowyerWatson(const std::vector<Vec2>& points) : pts_(points) {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (const Vec2& p : pts_) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        double size = std::max({x1 - x0, y1 - y0, 1e-12});
        int n = static_cast<int>(pts_.size());
        pts_.push_back({cx - 40.0 * size, cy - 20.0 * size});
        pts_.push_back({cx + 40.0 * size, cy - 20.0 * size});
        pts_.push_back({cx, cy + 40.0 * size});
        tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
        scale_ = size;

        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::mt19937_64 rng(12345);
        std::shuffle(order.begin(), order.end(), rng);
        for (int i : order) insert(i);
    }

    std::vector<MeshTriangle> result() const {
        int n = static_cast<int>(pts_.size()) - 3;
        std::vector<MeshTriangle> out;
        for (const DTri& t : tris_) {
            if (!t.alive) continue;
            if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
            out.push_back({{t.v[0], t.v[1], t.v[2]}});
        }
        return out;
    }

private:
    int locate(const Vec2& p) const {
        int cur = last_;
        if (cur < 0 || !tris_[static_cast<size_t>(cur)].alive) {
            for (size_t i = tris_.size(); i-- > 0;)
                if (tris_[i].alive) {
                    cur = static_cast<int>(i);
                    break;
                }
        }
        long double eps = 1e-13L * scale_ * scale_;
        for (size_t steps = 0; steps < 4 * tris_.size() + 64; ++steps) {
            const DTri& t = tris_[static_cast<size_t>(cur)];
            int move = -1;
            for (int e = 0; e < 3; ++e) {
                if (orient_ld(pts_[static_cast<size_t>(t.v[static_cast<size_t>(e)])],
                              pts_[static_cast<size_t>(t.v[static_cast<size_t>((e + 1) % 3)])],
                              p) < -eps) {
                    move = t.adj[static_cast<size_t>(e)];
                    break;
                }
            }
            if (move < 0) return cur;
            cur = move;
        }
        // degenerate walk: brute-force scan
        for (size_t i = 0; i < tris_.size(); ++i) {
            const DTri& t = tris_[i];
            if (!t.alive) continue;
            bool ok = true;
            for (int e = 0; e < 3 && ok; ++e)
                ok = orient_ld(pts_[static_cast<size_t>(t.v[static_cast<size_t>(e)])],
                               pts_[static_cast<size_t>(t.v[static_cast<size_t>((e + 1) % 3)])],
                               p) >= -eps;
            if (ok) return static_cast<int>(i);
        }
        throw Error(ErrorCode::MeshFailure, "delaunay: point location failed");
    }

    void insert(int pi) {
        const Vec2& p = pts_[static_cast<size_t>(pi)];
        int seed = locate(p);

        // cavity: connected set of triangles whose circumcircle contains p
        std::vector<int> cavity{seed};
        std::vector<int> stack{seed};
        std::unordered_map<int, char> in_cavity{{seed, 1}};
        while (!stack.empty()) {
            int ti = stack.back();
            stack.pop_back();
            const DTri t = tris_[static_cast<size_t>(ti)];
            for (int e = 0; e < 3; ++e) {
                int nb = t.adj[static_cast<size_t>(e)];
                if (nb < 0 || in_cavity.count(nb)) continue;
                const DTri& u = tris_[static_cast<size_t>(nb)];
                if (in_circumcircle(pts_[static_cast<size_t>(u.v[0])],
                                    pts_[static_cast<size_t>(u.v[1])],
                                    pts_[static_cast<size_t>(u.v[2])], p)) {
                    in_cavity[nb] = 1;
                    cavity.push_back(nb);
                    stack.push_back(nb);
                }
            }
        }

        struct BEdge {
            int a, b, outer;
        };
        std::vector<BEdge> border;
        for (int ti : cavity) {
            const DTri& t = tris_[static_cast<size_t>(ti)];
            for (int e = 0; e < 3; ++e) {
                int nb = t.adj[static_cast<size_t>(e)];
                if (nb >= 0 && in_cavity.count(nb)) continue;
                border.push_back({t.v[static_cast<size_t>(e)],
                                  t.v[static_cast<size_t>((e + 1) % 3)], nb});
            }
        }
        for (int ti : cavity) tris_[static_cast<size_t>(ti)].alive = false;

        std::unordered_map<int, int> by_first;  // border vertex a -> new triangle id
        std::vector<int> created;
        for (const BEdge& be : border) {
            int id = static_cast<int>(tris_.size());
            tris_.push_back({{be.a, be.b, pi}, {be.outer, -1, -1}, true});
            by_first[be.a] = id;
            created.push_back(id);
            if (be.outer >= 0) {  // repoint the outer neighbor at the new triangle
                DTri& o = tris_[static_cast<size_t>(be.outer)];
                for (int e = 0; e < 3; ++e)
                    if (o.v[static_cast<size_t>(e)] == be.b &&
                        o.v[static_cast<size_t>((e + 1) % 3)] == be.a)
                        o.adj[static_cast<size_t>(e)] = id;
            }
        }
        for (int id : created) {
            DTri& t = tris_[static_cast<size_t>(id)];
            t.adj[1] = by_first.at(t.v[1]);  // edge (b, p) meets the triangle starting at b
            tris_[static_cast<size_t>(t.adj[1])].adj[2] = id;
        }
        last_ = created.empty() ? last_ : created.back();
    }

    std::vector<Vec2> pts_;
    std::vector<DTri> tris_;
    double scale_ = 1.0;
    int last_ = 0;
};

double min_triangle_angle_deg(const Vec2& a, const Vec2& b, const Vec2& c) {
    double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    auto ang = [](double opp, double s1, double s2) {
        double v = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        return std::acos(std::clamp(v, -1.0, 1.0));
    };
    double m = std::min({ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)});
    return m * 180.0 / std::numbers::pi;
}

struct BuildResult {
    Mesh mesh;
    bool boundary_conforming = true;
};

BuildResult build_mesh(const Polytope& P, double spacing, const MeshOptions& opt) {
    std::vector<Vec2> pts;
    std::vector<char> bflag;
    std::vector<char> frozen;  // nodes excluded from smoothing
    std::vector<std::pair<int, int>> boundary_chain;  // consecutive boundary sample pairs

    std::vector<Vec2> reflex_pts;
    if (opt.grade_corners)
        for (int v : P.reflex_vertices()) reflex_pts.push_back(P.vertex(v));
    double step_floor = spacing * std::pow(0.5, opt.grade_rings);
    // shrinks toward reflex corners; the 0.375 factor keeps a forward march
    // from overshooting the graded zone
    auto local_step = [&](const Vec2& p) {
        double s = spacing;
        for (const Vec2& c : reflex_pts)
            s = std::min(s, std::max(0.375 * (p - c).norm(), step_floor));
        return s;
    };

    int m = static_cast<int>(P.facet_count());
    for (int f = 0; f < m; ++f) {
        Vec2 a = P.edge_a(f), b = P.edge_b(f);
        double L = (b - a).norm();
        Vec2 dir = (b - a) / L;
        if (reflex_pts.empty()) {
            int ns = std::max(1, static_cast<int>(std::ceil(L / spacing)));
            for (int j = 0; j < ns; ++j) {
                pts.push_back(a + dir * (L * j / ns));
                bflag.push_back(1);
                frozen.push_back(1);
            }
        } else {
            double s = 0.0;
            while (true) {
                pts.push_back(a + dir * s);
                bflag.push_back(1);
                frozen.push_back(1);
                double st = local_step(a + dir * s);
                if (s + 1.4 * st >= L) break;
                s += st;
            }
        }
    }
    size_t nb = pts.size();
    for (size_t i = 0; i < nb; ++i)
        boundary_chain.emplace_back(static_cast<int>(i), static_cast<int>((i + 1) % nb));

    // optional geometric grading rings around reflex corners
    std::vector<Vec2> graded;
    if (opt.grade_corners) {
        for (int v : P.reflex_vertices()) {
            Vec2 c = P.vertex(v);
            for (int ring = 1; ring <= opt.grade_rings; ++ring) {
                double r = spacing * std::pow(0.5, ring);
                int count = 12;
                for (int k = 0; k < count; ++k) {
                    double th = 2.0 * std::numbers::pi * k / count;
                    Vec2 p = c + Vec2{std::cos(th), std::sin(th)} * r;
                    if (P.strictly_inside(p) && P.boundary_distance(p) > 0.3 * r)
                        graded.push_back(p);
                }
            }
        }
    }
    for (const Vec2& g : graded) {
        pts.push_back(g);
        bflag.push_back(0);
        frozen.push_back(1);
    }

    // interior hexagonal lattice with deterministic tie-breaking jitter
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (size_t i = 0; i < P.vertex_count(); ++i) {
        Vec2 v = P.vertex(static_cast<int>(i));
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    std::mt19937_64 rng(9176);
    std::uniform_real_distribution<double> jit(-1e-6, 1e-6);
    double dy = spacing * std::sqrt(3.0) / 2.0;
    int row = 0;
    for (double y = y0 + 0.5 * dy; y < y1; y += dy, ++row) {
        double xoff = (row % 2) ? 0.5 * spacing : 0.0;
        for (double x = x0 + 0.5 * spacing + xoff; x < x1; x += spacing) {
            Vec2 p{x + jit(rng) * spacing, y + jit(rng) * spacing};
            if (!P.strictly_inside(p) || P.boundary_distance(p) < 0.7 * spacing) continue;
            bool near_graded = false;
            for (const Vec2& g : graded)
                if ((p - g).norm() < 0.6 * spacing) {
                    near_graded = true;
                    break;
                }
            if (near_graded) continue;
            pts.push_back(p);
            bflag.push_back(0);
            frozen.push_back(0);
        }
    }

    // Laplacian smoothing of the free interior nodes
    for (int it = 0; it < opt.smoothing_iters; ++it) {
        std::vector<MeshTriangle> tris = delaunay(pts);
        std::vector<Vec2> acc(pts.size(), Vec2{0, 0});
        std::vector<int> deg(pts.size(), 0);
        for (const MeshTriangle& t : tris) {
            for (int e = 0; e < 3; ++e) {
                int a = t.v[static_cast<size_t>(e)], b = t.v[static_cast<size_t>((e + 1) % 3)];
                acc[static_cast<size_t>(a)] += pts[static_cast<size_t>(b)];
                acc[static_cast<size_t>(b)] += pts[static_cast<size_t>(a)];
                deg[static_cast<size_t>(a)]++;
                deg[static_cast<size_t>(b)]++;
            }
        }
        for (size_t i = 0; i < pts.size(); ++i) {
            if (frozen[i] || deg[i] == 0) continue;
            Vec2 target = acc[i] / static_cast<double>(deg[i]);
            if (P.strictly_inside(target) && P.boundary_distance(target) >= 0.55 * spacing)
                pts[i] = target;
        }
    }

    std::vector<MeshTriangle> tris = delaunay(pts);

    BuildResult out;
    Mesh& mesh = out.mesh;
    mesh.nodes = pts;
    mesh.boundary_node = bflag;
    for (const MeshTriangle& t : tris) {
        Vec2 a = pts[static_cast<size_t>(t.v[0])], b = pts[static_cast<size_t>(t.v[1])],
             c = pts[static_cast<size_t>(t.v[2])];
        Vec2 centroid = (a + b + c) / 3.0;
        if (!P.strictly_inside(centroid)) continue;
        double area = 0.5 * (b - a).cross(c - a);
        if (area <= 1e-14 * spacing * spacing) continue;
        mesh.triangles.push_back(t);
    }

    mesh.node_triangles.assign(pts.size(), {});
    mesh.h = 0.0;
    mesh.min_angle_deg = 180.0;
    for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const MeshTriangle& t = mesh.triangles[ti];
        Vec2 a = pts[static_cast<size_t>(t.v[0])], b = pts[static_cast<size_t>(t.v[1])],
             c = pts[static_cast<size_t>(t.v[2])];
        mesh.h = std::max({mesh.h, (a - b).norm(), (b - c).norm(), (c - a).norm()});
        mesh.min_angle_deg = std::min(mesh.min_angle_deg, min_triangle_angle_deg(a, b, c));
        for (int e = 0; e < 3; ++e)
            mesh.node_triangles[static_cast<size_t>(t.v[static_cast<size_t>(e)])].push_back(
                static_cast<int>(ti));
    }

    // boundary conformity: every consecutive boundary sample pair is a mesh edge
    for (auto [a, b] : boundary_chain) {
        bool found = false;
        for (int ti : mesh.node_triangles[static_cast<size_t>(a)]) {
            const auto& v = mesh.triangles[static_cast<size_t>(ti)].v;
            if (v[0] == b || v[1] == b || v[2] == b) {
                found = true;
                break;
            }
        }
        if (!found) {
            out.boundary_conforming = false;
            break;
        }
    }

    // background grid for point location
    double cell = std::max(mesh.h, 1e-12);
    mesh.grid_origin = {x0, y0};
    mesh.grid_cell = cell;
    mesh.grid_nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / cell)));
    mesh.grid_ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / cell)));
    mesh.grid_cells.assign(static_cast<size_t>(mesh.grid_nx * mesh.grid_ny), {});
    for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const MeshTriangle& t = mesh.triangles[ti];
        double tx0 = 1e300, tx1 = -1e300, ty0 = 1e300, ty1 = -1e300;
        for (int e = 0; e < 3; ++e) {
            Vec2 p = pts[static_cast<size_t>(t.v[static_cast<size_t>(e)])];
            tx0 = std::min(tx0, p.x);
            tx1 = std::max(tx1, p.x);
            ty0 = std::min(ty0, p.y);
            ty1 = std::max(ty1, p.y);
        }
        int i0 = std::clamp(static_cast<int>((tx0 - x0) / cell), 0, mesh.grid_nx - 1);
        int i1 = std::clamp(static_cast<int>((tx1 - x0) / cell), 0, mesh.grid_nx - 1);
        int j0 = std::clamp(static_cast<int>((ty0 - y0) / cell), 0, mesh.grid_ny - 1);
        int j1 = std::clamp(static_cast<int>((ty1 - y0) / cell), 0, mesh.grid_ny - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                mesh.grid_cells[static_cast<size_t>(j * mesh.grid_nx + i)].push_back(
                    static_cast<int>(ti));
    }
    return out;
}

}  // namespace

std::vector<MeshTriangle> delaunay(const std::vector<Vec2>& points) {
    BowyerWatson bw(points);
    return bw.result();
}

double Mesh::triangle_area(int t) const {
    const MeshTriangle& tr = triangles[static_cast<size_t>(t)];
    Vec2 a = nodes[static_cast<size_t>(tr.v[0])], b = nodes[static_cast<size_t>(tr.v[1])],
         c = nodes[static_cast<size_t>(tr.v[2])];
    return 0.5 * (b - a).cross(c - a);
}

int Mesh::locate(const Vec2& x, double tol) const {
    if (grid_cell <= 0.0) return -1;
    int i = std::clamp(static_cast<int>((x.x - grid_origin.x) / grid_cell), 0, grid_nx - 1);
    int j = std::clamp(static_cast<int>((x.y - grid_origin.y) / grid_cell), 0, grid_ny - 1);
    double tol_abs = tol * std::max(h, 1e-12);
    int fallback = -1;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            int ci = i + di, cj = j + dj;
            if (ci < 0 || cj < 0 || ci >= grid_nx || cj >= grid_ny) continue;
            for (int ti : grid_cells[static_cast<size_t>(cj * grid_nx + ci)]) {
                const MeshTriangle& t = triangles[static_cast<size_t>(ti)];
                Vec2 a = nodes[static_cast<size_t>(t.v[0])], b = nodes[static_cast<size_t>(t.v[1])],
                     c = nodes[static_cast<size_t>(t.v[2])];
                double area2 = (b - a).cross(c - a);
                double l0 = (b - a).cross(x - a) / area2;
                double l1 = (c - b).cross(x - b) / area2;
                double l2 = (a - c).cross(x - c) / area2;
                if (l0 >= 0 && l1 >= 0 && l2 >= 0) return ti;
                double worst = std::min({l0, l1, l2});
                if (worst * h >= -tol_abs && fallback < 0) fallback = ti;
            }
        }
    }
    return fallback;
}

void finalize_mesh(Mesh& mesh) {
    mesh.node_triangles.assign(mesh.nodes.size(), {});
    mesh.h = 0.0;
    mesh.min_angle_deg = 180.0;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const Vec2& p : mesh.nodes) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const MeshTriangle& t = mesh.triangles[ti];
        Vec2 a = mesh.nodes[static_cast<size_t>(t.v[0])], b = mesh.nodes[static_cast<size_t>(t.v[1])],
             c = mesh.nodes[static_cast<size_t>(t.v[2])];
        mesh.h = std::max({mesh.h, (a - b).norm(), (b - c).norm(), (c - a).norm()});
        mesh.min_angle_deg = std::min(mesh.min_angle_deg, min_triangle_angle_deg(a, b, c));
        for (int e = 0; e < 3; ++e)
            mesh.node_triangles[static_cast<size_t>(t.v[static_cast<size_t>(e)])].push_back(
                static_cast<int>(ti));
    }
    double cell = std::max(mesh.h, 1e-12);
    mesh.grid_origin = {x0, y0};
    mesh.grid_cell = cell;
    mesh.grid_nx = std::max(1, static_cast<int>(std::ceil((x1 - x0) / cell)));
    mesh.grid_ny = std::max(1, static_cast<int>(std::ceil((y1 - y0) / cell)));
    mesh.grid_cells.assign(static_cast<size_t>(mesh.grid_nx * mesh.grid_ny), {});
    for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const MeshTriangle& t = mesh.triangles[ti];
        double tx0 = 1e300, tx1 = -1e300, ty0 = 1e300, ty1 = -1e300;
        for (int e = 0; e < 3; ++e) {
            Vec2 p = mesh.nodes[static_cast<size_t>(t.v[static_cast<size_t>(e)])];
            tx0 = std::min(tx0, p.x);
            tx1 = std::max(tx1, p.x);
            ty0 = std::min(ty0, p.y);
            ty1 = std::max(ty1, p.y);
        }
        int i0 = std::clamp(static_cast<int>((tx0 - x0) / cell), 0, mesh.grid_nx - 1);
        int i1 = std::clamp(static_cast<int>((tx1 - x0) / cell), 0, mesh.grid_nx - 1);
        int j0 = std::clamp(static_cast<int>((ty0 - y0) / cell), 0, mesh.grid_ny - 1);
        int j1 = std::clamp(static_cast<int>((ty1 - y0) / cell), 0, mesh.grid_ny - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                mesh.grid_cells[static_cast<size_t>(j * mesh.grid_nx + i)].push_back(
                    static_cast<int>(ti));
    }
}

Mesh generate_mesh(const Polytope& P, double h, const MeshOptions& opt) {
    if (P.dimension() != 2)
        throw Error(ErrorCode::ConfigError, "generate_mesh: 2D polytopes only");
    if (h <= 0.0) throw Error(ErrorCode::MeshFailure, "generate_mesh: h must be positive");

    double spacing = 0.6 * h;
    double angle_floor = opt.grade_corners ? std::min(opt.min_angle_deg, 12.0) : opt.min_angle_deg;
    for (int attempt = 0; attempt < 4; ++attempt) {
        BuildResult r = build_mesh(P, spacing, opt);
        bool ok = r.boundary_conforming && r.mesh.h <= h &&
                  r.mesh.min_angle_deg >= angle_floor && !r.mesh.triangles.empty();
        if (ok) return std::move(r.mesh);
        spacing *= 0.8;
    }
    throw Error(ErrorCode::MeshFailure, "generate_mesh: quality thresholds unreachable");
}

}  // namespace polynodal

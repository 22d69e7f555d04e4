#include "polynodal/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace polynodal {

namespace {

double pairwise_diameter(const std::vector<Vec3>& pts) {
    double d = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, (pts[i] - pts[j]).norm());
    return d;
}

// Ternary refinement of a 1D local minimum bracket.
template <typename F>
double refine_min(F&& f, double a, double b, int iters = 90) {
    double fa = f(a), fb = f(b);
    for (int i = 0; i < iters; ++i) {
        double m1 = a + (b - a) / 3.0;
        double m2 = b - (b - a) / 3.0;
        if (f(m1) < f(m2)) { b = m2; fb = f(m2); }
        else { a = m1; fa = f(m1); }
    }
    return std::min({fa, fb, f(0.5 * (a + b))});
}

double point_segment_distance3(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 == 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

Polytope Polytope::polygon(const std::vector<Vec2>& vertices) {
    Polytope P;
    P.dim_ = 2;
    if (vertices.size() < 3)
        throw Error(ErrorCode::OpenBoundary, "polygon needs at least 3 vertices");
    P.verts2_ = vertices;

    // Normalize to CCW so edge normals rotate outward uniformly.
    double area2 = 0.0;
    size_t m = vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % m];
        area2 += a.cross(b);
    }
    if (area2 < 0.0) std::reverse(P.verts2_.begin(), P.verts2_.end());

    P.verts3_.clear();
    for (const Vec2& v : P.verts2_) P.verts3_.emplace_back(v.x, v.y, 0.0);
    P.diam_ = pairwise_diameter(P.verts3_);
    if (P.diam_ <= 0.0) throw Error(ErrorCode::DegenerateFacet, "zero-diameter vertex set");

    P.validate_2d();
    P.build_lattice_2d();
    P.compute_derived();
    return P;
}

void Polytope::validate_2d() {
    size_t m = verts2_.size();
    double tol = tolerance();

    for (size_t i = 0; i < m; ++i) {
        const Vec2& a = verts2_[i];
        const Vec2& b = verts2_[(i + 1) % m];
        if ((b - a).norm() <= tol)
            throw Error(ErrorCode::DegenerateFacet, "zero-length edge at vertex " + std::to_string(i));
    }
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if ((verts2_[i] - verts2_[j]).norm() <= tol)
                throw Error(ErrorCode::NonSimpleBoundary,
                            "repeated vertex " + std::to_string(i) + "/" + std::to_string(j));

    // Non-adjacent edge pairs must not intersect.
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            if (j == i + 1 || (i == 0 && j == m - 1)) continue;
            if (segments_intersect(verts2_[i], verts2_[(i + 1) % m], verts2_[j], verts2_[(j + 1) % m]))
                throw Error(ErrorCode::NonSimpleBoundary,
                            "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
    }

    double area2 = 0.0;
    for (size_t i = 0; i < m; ++i) area2 += verts2_[i].cross(verts2_[(i + 1) % m]);
    area_ = 0.5 * area2;
    if (area_ <= tol * diam_)
        throw Error(ErrorCode::DegenerateFacet, "polygon area is degenerate");
}

void Polytope::build_lattice_2d() {
    size_t m = verts2_.size();
    facet_vertices_.clear();
    facet_normals_.clear();
    facet_offsets_.clear();
    for (size_t i = 0; i < m; ++i) {
        int a = static_cast<int>(i);
        int b = static_cast<int>((i + 1) % m);
        facet_vertices_.push_back({a, b});
        Vec2 d = (verts2_[b] - verts2_[a]).normalized();
        Vec2 n{d.y, -d.x};  // outward for CCW boundary
        facet_normals_.emplace_back(n.x, n.y, 0.0);
        facet_offsets_.push_back(n.dot(verts2_[a]));
    }

    lattice_.levels.assign(2, {});
    for (size_t i = 0; i < m; ++i) {
        Face v;
        v.dim = 0;
        v.vertices = {static_cast<int>(i)};
        v.parent_facets = {static_cast<int>((i + m - 1) % m), static_cast<int>(i)};
        lattice_.levels[0].push_back(std::move(v));
    }
    for (size_t i = 0; i < m; ++i) {
        Face e;
        e.dim = 1;
        e.vertices = facet_vertices_[i];
        e.parent_facets = {static_cast<int>(i)};
        e.boundary_faces = facet_vertices_[i];
        lattice_.levels[1].push_back(std::move(e));
    }
}

void Polytope::compute_derived() {
    if (dim_ == 2) {
        perimeter_ = 0.0;
        size_t m = verts2_.size();
        for (size_t i = 0; i < m; ++i)
            perimeter_ += (verts2_[(i + 1) % m] - verts2_[i]).norm();

        // Interior witness: inward-offset edge midpoints, falling back to the centroid.
        for (size_t i = 0; i < m && interior_witness_.x == 0 && interior_witness_.y == 0; ++i) {
            Vec2 mid = (verts2_[i] + verts2_[(i + 1) % m]) * 0.5;
            Vec2 n = facet_normals_[i].xy();
            for (double f : {1e-6, 1e-4, 1e-2}) {
                Vec2 cand = mid - n * (f * diam_);
                if (strictly_inside(cand) && boundary_distance(cand) > 0.5 * f * diam_) {
                    interior_witness_ = cand;
                    break;
                }
            }
        }
        if (!strictly_inside(interior_witness_)) {
            Vec2 c{0, 0};
            for (const Vec2& v : verts2_) c += v;
            c = c / static_cast<double>(verts2_.size());
            if (strictly_inside(c)) interior_witness_ = c;
        }
    }
}

Polytope Polytope::polyhedron(const std::vector<Vec3>& vertices,
                              const std::vector<std::vector<int>>& facets) {
    Polytope P;
    P.dim_ = 3;
    P.verts3_ = vertices;
    P.facet_vertices_ = facets;
    P.diam_ = pairwise_diameter(vertices);
    if (P.diam_ <= 0.0) throw Error(ErrorCode::DegenerateFacet, "zero-diameter vertex set");
    P.validate_3d();
    P.build_lattice_3d();
    return P;
}

void Polytope::validate_3d() {
    Vec3 centroid{0, 0, 0};
    for (const Vec3& v : verts3_) centroid = centroid + v;
    centroid = centroid * (1.0 / static_cast<double>(verts3_.size()));

    facet_normals_.clear();
    facet_offsets_.clear();
    double tol = tolerance();
    for (size_t f = 0; f < facet_vertices_.size(); ++f) {
        const auto& loop = facet_vertices_[f];
        if (loop.size() < 3) throw Error(ErrorCode::DegenerateFacet, "facet with <3 vertices");
        // Newell's method
        Vec3 n{0, 0, 0};
        Vec3 fc{0, 0, 0};
        for (size_t i = 0; i < loop.size(); ++i) {
            Vec3 a = verts3_[static_cast<size_t>(loop[i])];
            Vec3 b = verts3_[static_cast<size_t>(loop[(i + 1) % loop.size()])];
            n.x += (a.y - b.y) * (a.z + b.z);
            n.y += (a.z - b.z) * (a.x + b.x);
            n.z += (a.x - b.x) * (a.y + b.y);
            fc = fc + a;
        }
        double len = n.norm();
        if (len <= tol) throw Error(ErrorCode::DegenerateFacet, "zero-area facet");
        n = n * (1.0 / len);
        fc = fc * (1.0 / static_cast<double>(loop.size()));
        if (n.dot(fc - centroid) < 0.0) n = n * -1.0;
        double offset = n.dot(verts3_[static_cast<size_t>(loop[0])]);
        for (int vi : loop) {
            if (std::abs(n.dot(verts3_[static_cast<size_t>(vi)]) - offset) > 1e-12 * diam_)
                throw Error(ErrorCode::DegenerateFacet, "facet vertices not coplanar");
        }
        facet_normals_.push_back(n);
        facet_offsets_.push_back(offset);
    }
}

void Polytope::build_lattice_3d() {
    lattice_.levels.assign(3, {});

    std::map<std::pair<int, int>, int> edge_index;
    std::vector<std::vector<int>> vertex_parents(verts3_.size());

    for (size_t f = 0; f < facet_vertices_.size(); ++f) {
        const auto& loop = facet_vertices_[f];
        for (size_t i = 0; i < loop.size(); ++i) {
            int a = loop[i];
            int b = loop[(i + 1) % loop.size()];
            auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            if (it == edge_index.end()) {
                Face e;
                e.dim = 1;
                e.vertices = {key.first, key.second};
                e.boundary_faces = {key.first, key.second};
                e.parent_facets = {static_cast<int>(f)};
                edge_index[key] = static_cast<int>(lattice_.levels[1].size());
                lattice_.levels[1].push_back(std::move(e));
            } else {
                lattice_.levels[1][static_cast<size_t>(it->second)].parent_facets.push_back(
                    static_cast<int>(f));
            }
            vertex_parents[static_cast<size_t>(a)].push_back(static_cast<int>(f));
        }
    }
    for (const Face& e : lattice_.levels[1])
        if (e.parent_facets.size() != 2)
            throw Error(ErrorCode::OpenBoundary, "edge not shared by exactly two facets");

    for (size_t v = 0; v < verts3_.size(); ++v) {
        Face vf;
        vf.dim = 0;
        vf.vertices = {static_cast<int>(v)};
        auto& ps = vertex_parents[v];
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        vf.parent_facets = ps;
        lattice_.levels[0].push_back(std::move(vf));
    }
    for (size_t f = 0; f < facet_vertices_.size(); ++f) {
        Face ff;
        ff.dim = 2;
        ff.vertices = facet_vertices_[f];
        ff.parent_facets = {static_cast<int>(f)};
        const auto& loop = facet_vertices_[f];
        for (size_t i = 0; i < loop.size(); ++i) {
            auto key = std::minmax(loop[i], loop[(i + 1) % loop.size()]);
            ff.boundary_faces.push_back(edge_index.at(key));
        }
        lattice_.levels[2].push_back(std::move(ff));
    }
}

bool Polytope::strictly_inside(const Vec2& x) const {
    if (boundary_distance(x) <= tolerance()) return false;
    // Even-odd crossing count with the half-open edge rule.
    size_t m = verts2_.size();
    bool in = false;
    for (size_t i = 0, j = m - 1; i < m; j = i++) {
        const Vec2& a = verts2_[i];
        const Vec2& b = verts2_[j];
        if ((a.y > x.y) != (b.y > x.y)) {
            double t = (x.y - a.y) / (b.y - a.y);
            if (x.x < a.x + t * (b.x - a.x)) in = !in;
        }
    }
    return in;
}

bool Polytope::contains(const Vec2& x) const {
    return boundary_distance(x) <= 10.0 * tolerance() || strictly_inside(x);
}

double Polytope::boundary_distance(const Vec2& x) const {
    double d = std::numeric_limits<double>::infinity();
    size_t m = verts2_.size();
    for (size_t i = 0; i < m; ++i)
        d = std::min(d, point_segment_distance(x, verts2_[i], verts2_[(i + 1) % m]));
    return d;
}

double Polytope::skeleton_distance(const Vec2& x, int k) const {
    if (dim_ != 2) throw Error(ErrorCode::ConfigError, "2D skeleton query on a 3D polytope");
    if (!contains(x)) throw Error(ErrorCode::PointOutsideDomain, "skeleton_distance query point");
    if (k < 0 || k >= dim_) throw Error(ErrorCode::ConfigError, "skeleton level out of range");
    if (k == 0) {
        double d = std::numeric_limits<double>::infinity();
        for (const Vec2& v : verts2_) d = std::min(d, (x - v).norm());
        return d;
    }
    return boundary_distance(x);
}

double Polytope::skeleton_distance3(const Vec3& x, int k) const {
    if (dim_ != 3) throw Error(ErrorCode::ConfigError, "3D skeleton query on a 2D polytope");
    double d = std::numeric_limits<double>::infinity();
    if (k == 0) {
        for (const Vec3& v : verts3_) d = std::min(d, (x - v).norm());
    } else if (k == 1) {
        for (const Face& e : lattice_.levels[1])
            d = std::min(d, point_segment_distance3(x, verts3_[static_cast<size_t>(e.vertices[0])],
                                                    verts3_[static_cast<size_t>(e.vertices[1])]));
    } else if (k == 2) {
        for (size_t f = 0; f < facet_vertices_.size(); ++f) {
            const auto& loop = facet_vertices_[f];
            const Vec3& n = facet_normals_[f];
            double plane = n.dot(x) - facet_offsets_[f];
            Vec3 proj = x - n * plane;
            // Inside test in-plane: proj against every boundary edge half-plane.
            bool inside = true;
            for (size_t i = 0; i < loop.size(); ++i) {
                Vec3 a = verts3_[static_cast<size_t>(loop[i])];
                Vec3 b = verts3_[static_cast<size_t>(loop[(i + 1) % loop.size()])];
                Vec3 edge = b - a;
                Vec3 inward{n.y * edge.z - n.z * edge.y, n.z * edge.x - n.x * edge.z,
                            n.x * edge.y - n.y * edge.x};
                if (inward.dot(proj - a) < -tolerance()) { inside = false; break; }
            }
            if (inside) {
                d = std::min(d, std::abs(plane));
            } else {
                for (size_t i = 0; i < loop.size(); ++i)
                    d = std::min(d, point_segment_distance3(
                                        x, verts3_[static_cast<size_t>(loop[i])],
                                        verts3_[static_cast<size_t>(loop[(i + 1) % loop.size()])]));
            }
        }
    } else {
        throw Error(ErrorCode::ConfigError, "skeleton level out of range");
    }
    return d;
}

namespace {

// Distance from a point to the facet with index g (2D edge / 3D convex polygon).
double point_to_facet(const Polytope& P, const Vec3& x, int g) {
    if (P.dimension() == 2)
        return point_segment_distance(x.xy(), P.edge_a(g), P.edge_b(g));
    // Reuse the skeleton machinery piecewise: distance to one facet.
    const auto& loop = P.facet_vertices(g);
    Vec3 n = P.facet_normal3(g);
    double offset = n.dot(P.vertex3(loop[0]));
    double plane = n.dot(x) - offset;
    Vec3 proj = x - n * plane;
    bool inside = true;
    for (size_t i = 0; i < loop.size(); ++i) {
        Vec3 a = P.vertex3(loop[i]);
        Vec3 b = P.vertex3(loop[(i + 1) % loop.size()]);
        Vec3 edge = b - a;
        Vec3 inward{n.y * edge.z - n.z * edge.y, n.z * edge.x - n.x * edge.z,
                    n.x * edge.y - n.y * edge.x};
        if (inward.dot(proj - a) < 0.0) { inside = false; break; }
    }
    if (inside) return std::abs(plane);
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < loop.size(); ++i)
        d = std::min(d, point_segment_distance3(x, P.vertex3(loop[i]),
                                                P.vertex3(loop[(i + 1) % loop.size()])));
    return d;
}

bool shares_vertex(const Face& F, const std::vector<int>& gverts) {
    for (int v : F.vertices)
        if (std::find(gverts.begin(), gverts.end(), v) != gverts.end()) return true;
    return false;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    for (int v : a)
        if (std::find(b.begin(), b.end(), v) == b.end()) return false;
    return true;
}

}  // namespace

FaceDistanceConstant Polytope::face_distance_constant() const {
    FaceDistanceConstant out;
    int top = dim_ - 1;
    const auto& facets = lattice_.levels[static_cast<size_t>(top)];

    // c' over incident pairs, faces F of dim >= 1 only (vertices have empty
    // relative boundary and are handled by the vertex clearance R_0 instead).
    for (int fd = 1; fd <= top; ++fd) {
        for (const Face& F : lattice_.levels[static_cast<size_t>(fd)]) {
            for (size_t gi = 0; gi < facets.size(); ++gi) {
                const Face& G = facets[gi];
                if (subset_of(F.vertices, G.vertices)) continue;
                if (!shares_vertex(F, G.vertices)) continue;
                int g = static_cast<int>(gi);

                auto boundary_dist = [&](const Vec3& x) {
                    double d = std::numeric_limits<double>::infinity();
                    if (F.dim == 1) {
                        d = std::min((x - verts3_[static_cast<size_t>(F.vertices[0])]).norm(),
                                     (x - verts3_[static_cast<size_t>(F.vertices[1])]).norm());
                    } else {
                        for (size_t i = 0; i < F.vertices.size(); ++i)
                            d = std::min(d, point_segment_distance3(
                                                x, verts3_[static_cast<size_t>(F.vertices[i])],
                                                verts3_[static_cast<size_t>(
                                                    F.vertices[(i + 1) % F.vertices.size()])]));
                    }
                    return d;
                };

                double best = std::numeric_limits<double>::infinity();
                if (F.dim == 1) {
                    Vec3 a = verts3_[static_cast<size_t>(F.vertices[0])];
                    Vec3 b = verts3_[static_cast<size_t>(F.vertices[1])];
                    auto ratio = [&](double s) {
                        Vec3 x = a + (b - a) * s;
                        double db = boundary_dist(x);
                        return db > 0 ? point_to_facet(*this, x, g) / db
                                      : std::numeric_limits<double>::infinity();
                    };
                    // Dense grid plus near-endpoint limit samples; the ratio is
                    // locally constant near incident vertices, so the endpoint
                    // limits are captured exactly.
                    std::vector<double> ss;
                    for (int i = 1; i < 4096; ++i) ss.push_back(i / 4096.0);
                    for (double e : {1e-7, 1e-6, 1e-5}) { ss.push_back(e); ss.push_back(1 - e); }
                    std::sort(ss.begin(), ss.end());
                    int besti = -1;
                    for (size_t i = 0; i < ss.size(); ++i) {
                        double v = ratio(ss[i]);
                        if (v < best) { best = v; besti = static_cast<int>(i); }
                    }
                    if (besti > 0 && besti + 1 < static_cast<int>(ss.size()))
                        best = std::min(best, refine_min(ratio, ss[static_cast<size_t>(besti - 1)],
                                                         ss[static_cast<size_t>(besti + 1)]));
                } else {
                    // Facet F (n=3): fan-triangulated barycentric grid.
                    Vec3 p0 = verts3_[static_cast<size_t>(F.vertices[0])];
                    const int res = 48;
                    for (size_t t = 1; t + 1 < F.vertices.size(); ++t) {
                        Vec3 p1 = verts3_[static_cast<size_t>(F.vertices[t])];
                        Vec3 p2 = verts3_[static_cast<size_t>(F.vertices[t + 1])];
                        for (int i = 0; i <= res; ++i) {
                            for (int j = 0; j <= res - i; ++j) {
                                double u = static_cast<double>(i) / res;
                                double v = static_cast<double>(j) / res;
                                Vec3 x = p0 + (p1 - p0) * u + (p2 - p0) * v;
                                double db = boundary_dist(x);
                                if (db <= 0) continue;
                                best = std::min(best, point_to_facet(*this, x, g) / db);
                            }
                        }
                    }
                }
                out.c_adjacent = std::min(out.c_adjacent, best);
            }
        }
    }

    // c'' over disjoint pairs; vertices are excluded here as well and are
    // handled by the vertex clearance R_0.
    for (int fd = 1; fd <= top; ++fd) {
        for (const Face& F : lattice_.levels[static_cast<size_t>(fd)]) {
            for (size_t gi = 0; gi < facets.size(); ++gi) {
                const Face& G = facets[gi];
                if (shares_vertex(F, G.vertices)) continue;
                int g = static_cast<int>(gi);
                double d = std::numeric_limits<double>::infinity();
                if (F.dim == 0) {
                    d = point_to_facet(*this, verts3_[static_cast<size_t>(F.vertices[0])], g);
                } else if (F.dim == 1) {
                    Vec3 a = verts3_[static_cast<size_t>(F.vertices[0])];
                    Vec3 b = verts3_[static_cast<size_t>(F.vertices[1])];
                    auto fdist = [&](double s) { return point_to_facet(*this, a + (b - a) * s, g); };
                    double best = std::numeric_limits<double>::infinity();
                    int besti = 0;
                    const int K = 512;
                    for (int i = 0; i <= K; ++i) {
                        double v = fdist(static_cast<double>(i) / K);
                        if (v < best) { best = v; besti = i; }
                    }
                    double lo = std::max(0.0, (besti - 1.0) / K);
                    double hi = std::min(1.0, (besti + 1.0) / K);
                    d = std::min(best, refine_min(fdist, lo, hi));
                } else {
                    Vec3 p0 = verts3_[static_cast<size_t>(F.vertices[0])];
                    const int res = 48;
                    for (size_t t = 1; t + 1 < F.vertices.size(); ++t) {
                        Vec3 p1 = verts3_[static_cast<size_t>(F.vertices[t])];
                        Vec3 p2 = verts3_[static_cast<size_t>(F.vertices[t + 1])];
                        for (int i = 0; i <= res; ++i)
                            for (int j = 0; j <= res - i; ++j)
                                d = std::min(d, point_to_facet(*this, p0 + (p1 - p0) * (1.0 * i / res) +
                                                                          (p2 - p0) * (1.0 * j / res),
                                                               g));
                    }
                }
                out.c_disjoint = std::min(out.c_disjoint, d);
            }
        }
    }

    out.c_star = std::min(out.c_adjacent, out.c_disjoint / diam_);
    return out;
}

double Polytope::c_star() const { return face_distance_constant().c_star; }

double Polytope::vertex_clearance(int vertex_index) const {
    double d = std::numeric_limits<double>::infinity();
    Vec3 v = verts3_[static_cast<size_t>(vertex_index)];
    for (size_t g = 0; g < facet_vertices_.size(); ++g) {
        const auto& gv = facet_vertices_[g];
        if (std::find(gv.begin(), gv.end(), vertex_index) != gv.end()) continue;
        d = std::min(d, point_to_facet(*this, v, static_cast<int>(g)));
    }
    return d;
}

double Polytope::vertex_radius_r0() const {
    double r0 = std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < verts3_.size(); ++v)
        r0 = std::min(r0, vertex_clearance(static_cast<int>(v)));
    return r0;
}

int Polytope::facet_containing(const Vec2& x, double tol) const {
    for (size_t f = 0; f < facet_vertices_.size(); ++f)
        if (point_segment_distance(x, edge_a(static_cast<int>(f)), edge_b(static_cast<int>(f))) <= tol)
            return static_cast<int>(f);
    return -1;
}

int Polytope::vertex_near(const Vec2& x, double tol) const {
    for (size_t v = 0; v < verts2_.size(); ++v)
        if ((x - verts2_[v]).norm() <= tol) return static_cast<int>(v);
    return -1;
}

std::vector<int> Polytope::reflex_vertices() const {
    std::vector<int> out;
    size_t m = verts2_.size();
    for (size_t i = 0; i < m; ++i) {
        Vec2 prev = verts2_[(i + m - 1) % m];
        Vec2 next = verts2_[(i + 1) % m];
        if ((verts2_[i] - prev).cross(next - verts2_[i]) < -tolerance())
            out.push_back(static_cast<int>(i));
    }
    return out;
}

double Polytope::max_chart_lipschitz() const {
    double L = 0.0;
    size_t m = verts2_.size();
    for (size_t i = 0; i < m; ++i) {
        Vec2 prev = verts2_[(i + m - 1) % m];
        Vec2 next = verts2_[(i + 1) % m];
        Vec2 d1 = (prev - verts2_[i]).normalized();
        Vec2 d2 = (next - verts2_[i]).normalized();
        // Interior angle at the vertex (CCW boundary).
        double ang = std::atan2(d1.cross(d2), d1.dot(d2));
        double interior = std::numbers::pi - ang;
        if (interior < 0) interior += 2 * std::numbers::pi;
        double half = 0.5 * interior;
        double s = std::sin(half);
        if (std::abs(s) < 1e-12) continue;
        L = std::max(L, std::abs(std::cos(half) / s));
    }
    return L;
}

Vec2 Polytope::vertical_projection(const Vec2& x, const ChartFrame& frame) const {
    if (!contains(x)) throw Error(ErrorCode::ChartMiss, "point not in the closed domain");
    if (frame.r0 > 0.0 && (x - frame.origin).norm() > frame.r0 + tolerance())
        throw Error(ErrorCode::ChartMiss, "point outside the chart ball");
    Vec2 dir = frame.up * -1.0;
    double best = std::numeric_limits<double>::infinity();
    size_t m = verts2_.size();
    for (size_t i = 0; i < m; ++i) {
        Vec2 a = verts2_[i];
        Vec2 b = verts2_[(i + 1) % m];
        Vec2 e = b - a;
        double denom = dir.cross(e);
        if (std::abs(denom) < 1e-15) {
            // Ray parallel to the edge: accept only if x lies on it (s=0 hit).
            if (point_segment_distance(x, a, b) <= tolerance()) best = std::min(best, 0.0);
            continue;
        }
        double s = (a - x).cross(e) / denom;          // along the ray
        double t = (a - x).cross(dir) / denom;        // along the edge
        if (s >= -tolerance() && t >= -1e-12 && t <= 1.0 + 1e-12) best = std::min(best, std::max(s, 0.0));
    }
    if (!std::isfinite(best)) throw Error(ErrorCode::ChartMiss, "no boundary below the point");
    return x + dir * best;
}

Vec2 Polytope::boundary_point_at(double s) const {
    size_t m = verts2_.size();
    s = std::fmod(s, perimeter_);
    if (s < 0) s += perimeter_;
    for (size_t i = 0; i < m; ++i) {
        Vec2 a = verts2_[i];
        Vec2 b = verts2_[(i + 1) % m];
        double len = (b - a).norm();
        if (s <= len) return a + (b - a) * (s / len);
        s -= len;
    }
    return verts2_[0];
}

Polytope make_unit_square() {
    return Polytope::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

Polytope make_rectangle(double a, double b) {
    return Polytope::polygon({{0, 0}, {a, 0}, {a, b}, {0, b}});
}

Polytope make_l_shape() {
    return Polytope::polygon({{-1, -1}, {1, -1}, {1, 0}, {0, 0}, {0, 1}, {-1, 1}});
}

Polytope make_t_shape() {
    return Polytope::polygon({{-1.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}, {0.5, 2}, {-0.5, 2},
                              {-0.5, 1}, {-1.5, 1}});
}

Polytope make_regular_polygon(int sides, double circumradius) {
    std::vector<Vec2> v;
    for (int i = 0; i < sides; ++i) {
        double a = 2.0 * std::numbers::pi * i / sides;
        v.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return Polytope::polygon(v);
}

}  // namespace polynodal

#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "polynodal/common.hpp"

namespace polynodal {

// A k-face of the polytope. Vertices are indices into Polytope::vertices().
struct Face {
    int dim = 0;
    std::vector<int> vertices;
    std::vector<int> parent_facets;   // facet indices containing this face
    std::vector<int> boundary_faces;  // indices into level dim-1 of the lattice
};

// levels[k] holds all k-faces, k = 0 .. n-1.
struct FaceLattice {
    std::vector<std::vector<Face>> levels;

    const std::vector<Face>& faces(int k) const { return levels.at(static_cast<size_t>(k)); }
};

// Decomposition of the face-separation constant of a polytope: the final
// constant is min(c_adjacent, c_disjoint / diam).
struct FaceDistanceConstant {
    double c_adjacent = std::numeric_limits<double>::infinity();  // c' over incident pairs
    double c_disjoint = std::numeric_limits<double>::infinity();  // c'' = min distance over disjoint pairs
    double c_star = 0.0;
};

struct ChartFrame {
    Vec2 origin;  // boundary point the chart is centered at
    Vec2 up;      // unit "vertical" direction of the graph frame (points into P)
    double r0 = 0.0;
};

class Polytope {
public:
    // n=2: vertices in boundary order (simple polygon, any orientation; normalized to CCW).
    static Polytope polygon(const std::vector<Vec2>& vertices);

    // n=3: vertex list plus per-facet vertex loops.
    static Polytope polyhedron(const std::vector<Vec3>& vertices,
                               const std::vector<std::vector<int>>& facets);

    int dimension() const { return dim_; }
    double diameter() const { return diam_; }
    double tolerance() const { return 1e-12 * diam_; }

    size_t vertex_count() const { return verts3_.size(); }
    Vec3 vertex3(int i) const { return verts3_[static_cast<size_t>(i)]; }
    Vec2 vertex(int i) const { return verts3_[static_cast<size_t>(i)].xy(); }
    const std::vector<Vec2>& polygon_vertices() const { return verts2_; }

    size_t facet_count() const { return facet_vertices_.size(); }
    const std::vector<int>& facet_vertices(int f) const { return facet_vertices_[static_cast<size_t>(f)]; }
    Vec3 facet_normal3(int f) const { return facet_normals_[static_cast<size_t>(f)]; }
    Vec2 facet_normal(int f) const { return facet_normals_[static_cast<size_t>(f)].xy(); }

    // n=2 edge endpoints (edge f runs vertex f -> vertex (f+1)%m, CCW).
    Vec2 edge_a(int f) const { return vertex(facet_vertices_[static_cast<size_t>(f)][0]); }
    Vec2 edge_b(int f) const { return vertex(facet_vertices_[static_cast<size_t>(f)][1]); }

    const FaceLattice& face_lattice() const { return lattice_; }

    // Euclidean distance d(x, F^k); +inf if the skeleton level is empty.
    double skeleton_distance(const Vec2& x, int k) const;
    double skeleton_distance3(const Vec3& x, int k) const;

    FaceDistanceConstant face_distance_constant() const;
    double c_star() const;

    // min over vertices v of inf_{facet G, v not in G} d(v, G)
    double vertex_radius_r0() const;
    // inf_{facet G, d(x,G)>tol at x's own faces} for a single vertex
    double vertex_clearance(int vertex_index) const;

    // --- 2D queries ---
    bool contains(const Vec2& x) const;          // closure membership (tolerance-padded)
    bool strictly_inside(const Vec2& x) const;   // open interior
    double boundary_distance(const Vec2& x) const;
    double signed_area() const { return area_; }
    Vec2 interior_point() const { return interior_witness_; }

    // Index of a facet within tol of x, or -1.
    int facet_containing(const Vec2& x, double tol) const;
    // Index of a vertex within tol of x, or -1.
    int vertex_near(const Vec2& x, double tol) const;

    // Indices of reflex (interior angle > pi) vertices, n=2.
    std::vector<int> reflex_vertices() const;

    // Max Lipschitz constant over vertex charts (graph of the two incident
    // edges in the bisector frame), n=2.
    double max_chart_lipschitz() const;

    // Vertical projection onto the boundary in the chart frame: the first
    // boundary hit of the ray x - s*frame.up, s >= 0.
    Vec2 vertical_projection(const Vec2& x, const ChartFrame& frame) const;

    // Distance from point along boundary arclength s in [0, perimeter) -> point.
    double perimeter() const { return perimeter_; }
    Vec2 boundary_point_at(double s) const;

private:
    Polytope() = default;
    void build_lattice_2d();
    void build_lattice_3d();
    void validate_2d();
    void validate_3d();
    void compute_derived();

    int dim_ = 2;
    std::vector<Vec3> verts3_;
    std::vector<Vec2> verts2_;                       // n=2 convenience copy
    std::vector<std::vector<int>> facet_vertices_;   // ordered loop (n=3) / pair (n=2)
    std::vector<Vec3> facet_normals_;
    std::vector<double> facet_offsets_;              // n.x = offset on the facet plane
    FaceLattice lattice_;
    double diam_ = 0.0;
    double area_ = 0.0;
    double perimeter_ = 0.0;
    Vec2 interior_witness_;
};

// Convenience builders for the polygons used throughout the test suites.
Polytope make_unit_square();
Polytope make_rectangle(double a, double b);
Polytope make_l_shape();   // [-1,1]^2 minus (0,1)x(0,1), reentrant corner at the origin
Polytope make_t_shape();
Polytope make_regular_polygon(int sides, double circumradius);

}  // namespace polynodal

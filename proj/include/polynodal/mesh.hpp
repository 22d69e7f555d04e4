#pragma once

#include <array>
#include <vector>

#include "polynodal/polytope.hpp"

namespace polynodal {

struct MeshTriangle {
    std::array<int, 3> v;  // CCW node indices
};

struct MeshOptions {
    double min_angle_deg = 20.0;
    bool grade_corners = false;
    int grade_rings = 3;
    int smoothing_iters = 3;
};

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<MeshTriangle> triangles;
    std::vector<char> boundary_node;               // 1 if the node lies on ∂P
    std::vector<std::vector<int>> node_triangles;  // incident triangles per node
    double h = 0.0;                                // max edge length
    double min_angle_deg = 0.0;

    // background grid for point location
    Vec2 grid_origin;
    double grid_cell = 0.0;
    int grid_nx = 0, grid_ny = 0;
    std::vector<std::vector<int>> grid_cells;

    double triangle_area(int t) const;
    // triangle containing x (barycentric within tol), or -1
    int locate(const Vec2& x, double tol = 1e-9) const;
};

Mesh generate_mesh(const Polytope& P, double h, const MeshOptions& opt = {});

// Rebuild the derived fields (node_triangles, h, min_angle_deg, location
// grid) from nodes/triangles/boundary_node — used when deserializing.
void finalize_mesh(Mesh& mesh);

// Delaunay triangulation of a point set (exposed for testing); returns CCW
// triangles over point indices.
std::vector<MeshTriangle> delaunay(const std::vector<Vec2>& points);

}  // namespace polynodal

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "polynodal/polytope.hpp"

namespace polynodal {

struct ViolationWitness {
    int facet = -1;
    Vec2 point;
    double value = 0.0;  // (point - center) . n_facet
};

struct StarCertificate {
    Vec2 center;
    double radius = 0.0;
    bool star_shaped = false;
    double min_normal_value = 0.0;  // min over flat pieces of (y-x).n
    std::optional<ViolationWitness> witness;
    size_t component_pieces = 0;
    int component_id = 0;  // index of the component's boundary loop
};

// Straight piece of the boundary of (component of) B_r(x) ∩ P.
struct BoundaryPiece {
    int facet = -1;
    Vec2 a, b;
};

struct ComponentBoundary {
    std::vector<BoundaryPiece> segments;
    // circle arcs [angle_from, angle_to] CCW, part of the component boundary
    std::vector<std::pair<double, double>> arcs;
    bool whole_polygon = false;  // P entirely inside the disk
    bool pure_disk = false;      // disk entirely inside P
    int component_id = 0;
};

// Boundary of the connected component of B_r(x) ∩ P containing x.
ComponentBoundary component_boundary(const Polytope& P, const Vec2& x, double r);

StarCertificate star_certificate(const Polytope& P, const Vec2& x, double r,
                                 double tol = -1.0);

struct MsrResult {
    Vec2 center;
    double value = 0.0;  // certified radius (lower bracket)
    double r_lo = 0.0;
    double r_hi = 0.0;
    double generic_bound = 0.0;                  // d(x, F^{n-2})
    std::optional<double> stratum_bound;         // c* d(x, F^{n-i-1}) on a face stratum
    std::optional<double> vertex_bound;          // clearance at a vertex center
    double vertex_radius_r0 = 0.0;
};

struct MsrBounds {
    double generic_bound = 0.0;
    std::optional<double> stratum_bound;
    std::optional<double> vertex_bound;
    double vertex_radius_r0 = 0.0;

    double max_applicable() const;
};

MsrBounds msr_lower_bounds(const Polytope& P, const Vec2& x, double c_star);

MsrResult max_star_radius(const Polytope& P, const Vec2& x, double tol = -1.0,
                          std::optional<double> c_star = std::nullopt);

struct VerticalShiftResult {
    bool holds = false;
    double r_star_x = 0.0;
    double r_double_star = 0.0;  // R**(x) = min(R*(x), r0/4)
    double r_star_shifted = 0.0;
    Vec2 shifted;
};

VerticalShiftResult vertical_shift_check(const Polytope& P, const Vec2& x,
                                         const ChartFrame& frame, double t,
                                         double tol = -1.0);

struct CoverBall {
    int level = 0;
    int index = 0;
    Vec2 center;
    double certified_radius = 0.0;
    double covering_radius = 0.0;
    StarCertificate certificate;
};

struct StarCover {
    double r0 = 0.0;
    double c_star = 0.0;
    double shrink = 1.0 / 32.0;  // the 1/32 of the construction, overridable
    std::vector<CoverBall> balls;
};

StarCover boundary_cover(const Polytope& P, double r0,
                         std::optional<double> c_star = std::nullopt,
                         double shrink = 1.0 / 32.0);

struct CoverReport {
    bool ok = false;
    size_t samples = 0;
    size_t gaps = 0;
    std::optional<Vec2> gap_witness;
    size_t certificate_failures = 0;
    int max_multiplicity = 0;
};

// strict: throw CoverageGap / CertificateFailure instead of reporting them.
CoverReport cover_verify(const Polytope& P, const StarCover& cover, size_t samples,
                         bool strict = false);

}  // namespace polynodal

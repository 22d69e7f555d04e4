#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "polynodal/doubling.hpp"
#include "polynodal/eigen_solver.hpp"
#include "polynodal/field.hpp"

namespace polynodal {

struct NodalSegment {
    Vec2 a, b;
    int triangle = -1;
    bool boundary_adjacent = false;  // source triangle touches the boundary
    int shell = -1;                  // filled by shell_accounting
    double length() const { return (b - a).norm(); }
    Vec2 midpoint() const { return (a + b) * 0.5; }
};

struct NodalSet {
    std::vector<NodalSegment> segments;
    std::vector<int> degenerate_triangles;  // all-zero interpolant, excluded
    double degenerate_area = 0.0;
    double total_length = 0.0;
};

// Marching-triangles zero set of the P1 interpolant. Exact vertex zeros are
// tie-broken as positive so shared edges are emitted once; segments with both
// endpoints on the polygon boundary (the Dirichlet trace) are dropped — the
// measured set is the interior nodal set.
NodalSet extract_nodal_set(const DiscretePlanarField& f);

// Total length, or the length of the segments whose midpoint satisfies the
// predicate (midpoint classification makes partition sums exactly additive).
double nodal_measure(const NodalSet& z);
double nodal_measure(const NodalSet& z, const std::function<bool(const Vec2&)>& region);
double nodal_measure_ball(const NodalSet& z, const Vec2& c, double r);
// P_delta = {x in P : d(x, boundary) <= delta}
double nodal_measure_boundary_strip(const NodalSet& z, const Polytope& P, double delta);

// H^2 of (Z x R) ∩ B_r(c) in the cylinder: per-segment chord integrals.
double nodal_measure_ball3(const NodalSet& z, const Vec3& c, double r);

// rho_max default: 10x the largest calibration ratio 2k/(2k+3) (k = 5).
inline constexpr double kDefaultRhoMax = 10.0 * 10.0 / 13.0;

struct FlatBoundReport {
    double length = 0.0;    // nodal measure in B_r(x), dimension n-1
    double n_4r = 0.0;      // N_u(x, 4r)
    double rho = 0.0;       // length / ((N+1) r^{n-1})
    double rho_max = 0.0;
    bool pass = false;
};

// Flat local bound: requires d(x, F^{n-2}) >= 8r (FlatnessViolation
// otherwise), so B_{8r}(x) meets at most one facet.
FlatBoundReport local_flat_bound_check(const Field& u, const NodalSet& z, const Vec3& x,
                                       double r, double rho_max = kDefaultRhoMax);

struct Shell {
    int k = 0;
    double d_lo = 0.0, d_hi = 0.0;  // 2^{-k} r0 < d(y, F^{n-2}) <= 2^{-k+1} r0
    double nodal_length = 0.0;
    int ball_count = 0;
    double ball_radius = 0.0;
};

struct ShellDecomposition {
    Vec2 center;
    double r0 = 0.0;
    int k_max = 0;
    bool certificate_ok = false;
    std::vector<Shell> shells;
    double unresolved_length = 0.0;  // d <= 2^{-k_max} r0, below resolution
    double outside_length = 0.0;     // d > r0 (center far from the skeleton)
    double total_length = 0.0;       // nodal measure in B(center, r0/8)
    NodalSet nodal;                  // extracted set with shell indices filled
};

// Dyadic shells around F^{n-2} inside B(center, r0/8), with per-shell nodal
// length and a greedy covering by balls of radius c1 2^{-k-5} r0. K_max
// defaults to the last shell above mesh resolution (2^{-k} r0 >= 4h).
ShellDecomposition shell_accounting(const Polytope& P, const DiscretePlanarField& f,
                                    const Vec2& center, double r0,
                                    std::optional<int> k_max = std::nullopt,
                                    std::optional<double> c1 = std::nullopt);

struct YauEntry {
    int index = 0;
    double lambda = 0.0;
    bool cluster = false;
    double length = 0.0;
    double ratio = 0.0;  // length / sqrt(lambda)
};

struct YauSurvey {
    std::vector<YauEntry> entries;
    double max_ratio = 0.0;
    double trend_slope = 0.0;  // OLS slope of log(ratio) vs log(lambda), zeros skipped
};

// Interior nodal length per eigenfunction and the scaling diagnostic; throws
// ResolutionGuard unless lambda_max * h^2 <= 0.5.
YauSurvey yau_upper_survey(std::shared_ptr<const Polytope> P, std::shared_ptr<const Mesh> mesh,
                           const std::vector<EigenPair>& pairs);

}  // namespace polynodal

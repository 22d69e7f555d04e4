#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "polynodal/eigen_solver.hpp"
#include "polynodal/field.hpp"
#include "polynodal/star.hpp"

namespace polynodal {

// ∫_{B_r(x) ∩ Ω} u². `empty` is set (with value 0) when the ball misses the
// domain entirely; centers inside the closure never trigger it.
struct BallMass {
    double value = 0.0;
    bool empty = false;
};
BallMass ball_mass(const Field& u, const Vec3& x, double r);

// Absolute mass scale below which values are quadrature noise:
// 1e3 * machine-epsilon relative to the domain-wide mass of u.
double noise_floor(const Field& u);

// N_u(x,r) = log2( mass(2r) / mass(r) ). Throws NoiseFloor when either mass
// sits below the floor (pass a precomputed floor to amortize the reference
// integral across many evaluations).
double doubling(const Field& u, const Vec3& x, double r);
double doubling(const Field& u, const Vec3& x, double r, double floor);

// Geometric radius grid r_min, r_min*ratio, ..., capped at r_max (inclusive
// within a relative 1e-12 slack). Default ratio 2^{1/8}.
inline constexpr double kDefaultGridRatio = 1.0905077326652577;  // 2^(1/8)
std::vector<double> geometric_radii(double r_min, double r_max,
                                    double ratio = kDefaultGridRatio);

struct DoublingProfile {
    Vec3 center;
    int ambient_dim = 2;
    // star certificate for Ω ∩ B(x, 2*max r) w.r.t. x (monotonicity hypothesis)
    bool certificate_ok = false;
    StarCertificate certificate;
    std::vector<double> radii;
    std::vector<double> mass;    // ∫_{B_r ∩ Ω} u²
    std::vector<double> mass2;   // ∫_{B_2r ∩ Ω} u²
    std::vector<double> H;       // sphere integral
    std::vector<double> D;       // Dirichlet energy of the ball
    std::vector<double> beta;    // r D / H
    std::vector<double> N;       // log2(mass2/mass)
    std::vector<bool> noise;     // entry below the quadrature noise floor
    double floor = 0.0;
};

// H, D, β, N on the grid; certificate failure does not abort, the profile is
// computed and flagged so monotonicity assertions can exclude it.
DoublingProfile frequency_profile(const Field& u, const Vec3& x,
                                  const std::vector<double>& radii);

struct MonotonicityReport {
    bool certificate_ok = false;
    // worst adjacent-step decrease (positive = violation), noise entries skipped
    double worst_n_violation = 0.0;
    double worst_beta_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // certificate_ok and both violations within tolerance
};
MonotonicityReport monotonicity_check(const DoublingProfile& profile,
                                      double tolerance = 1e-3);

struct FourSphereReport {
    double tau = 0.0, t = 0.0;
    bool certificate_ok = false;  // star certificate at radius 2t
    double h_tau = 0.0, h_2tau = 0.0, h_t = 0.0, h_2t = 0.0;
    double lhs = 0.0;         // H(2τ) H(t)
    double rhs = 0.0;         // H(τ) H(2t)
    double rel_defect = 0.0;  // (lhs - rhs) / rhs, negative when strict
    bool holds = false;       // lhs <= rhs within the relative tolerance
};
// Requires 0 < τ < t; inequality asserted within rel_tol plus quadrature slack.
FourSphereReport four_sphere_check(const Field& u, const Vec3& x, double tau, double t,
                                   double rel_tol = 1e-6);

// Polyline from the base center γ(0) to the query point x = γ(last), with the
// (r, R, C1, C2) parameters of the doubling-propagation estimate.
struct CurveSpec {
    std::vector<Vec3> vertices;
    double r = 0.0;
    double R = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double length() const;
};

struct PropagationReport {
    double n_far = 0.0;   // N_u(x, r)
    double n_base = 0.0;  // N_u(0, R/2)
    double c_emp = 0.0;   // n_far / n_base
    double bound = 0.0;   // (1 + log2 C1) * 2^C2
    double curve_length = 0.0;
    bool holds = false;
};
// Verifies the hypotheses (endpoints, per-vertex star certificates at radius
// 4r inside B(0, min(R, C1 r)), |γ| <= C2 r, star certificate at B(0,R));
// throws HypothesisFailure naming the violated condition, otherwise measures
// the realized propagation constant.
PropagationReport propagation_check(const Field& u, const CurveSpec& curve);

// Working chart constant of the propagation harness: scale / ℓ0 with
// ℓ0 = 1/sqrt(1+L²) and L the max facet-chart Lipschitz constant of P.
double chart_working_constant(const Polytope& P, double scale = 32.0);

struct SurveyEntry {
    int eigen_index = 0;
    double lambda = 0.0;
    Vec3 center;
    double r = 0.0;
    double n = 0.0;      // N_{u_λ}((x,t), r)
    double ratio = 0.0;  // n / sqrt(λ)
    bool noise = false;  // below the floor; n/ratio not meaningful
};

struct DoublingSurvey {
    std::vector<SurveyEntry> entries;
    // per eigenpair: (λ, sup over centers of N/sqrt(λ)), noise entries skipped
    std::vector<std::pair<double, double>> sup_ratio;
};

// Doubling indices of the lifted eigenfunctions at the given centers (|t|<1).
DoublingSurvey eigen_doubling_survey(std::shared_ptr<const Polytope> P,
                                     std::shared_ptr<const Mesh> mesh,
                                     const std::vector<EigenPair>& pairs,
                                     const std::vector<Vec3>& centers, double r);

}  // namespace polynodal

#include "polynodal/doubling.hpp"

#include <algorithm>
#include <limits>

namespace polynodal {

namespace {

double machine_floor_scale() { return 1e3 * std::numeric_limits<double>::epsilon(); }

void require_positive_radius(double r, const char* who) {
    if (!(r > 0.0))
        throw Error(ErrorCode::NonPositiveRadius, std::string(who) + ": radius must be positive");
}

}  // namespace

BallMass ball_mass(const Field& u, const Vec3& x, double r) {
    require_positive_radius(r, "ball_mass");
    const Polytope& P = u.base_domain();
    Vec2 p = x.xy();
    if (!P.contains(p) && P.boundary_distance(p) > r) return {0.0, true};
    return {u.ball_mass(x, r), false};
}

double noise_floor(const Field& u) {
    return machine_floor_scale() * u.reference_mass();
}

double doubling(const Field& u, const Vec3& x, double r) {
    return doubling(u, x, r, noise_floor(u));
}

double doubling(const Field& u, const Vec3& x, double r, double floor) {
    require_positive_radius(r, "doubling");
    BallMass m1 = ball_mass(u, x, r);
    BallMass m2 = ball_mass(u, x, 2.0 * r);
    if (m1.empty || m2.empty || m1.value <= floor || m2.value <= floor)
        throw Error(ErrorCode::NoiseFloor, "doubling: ball mass below the quadrature noise floor");
    return std::log2(m2.value / m1.value);
}

std::vector<double> geometric_radii(double r_min, double r_max, double ratio) {
    if (!(r_min > 0.0) || !(r_max >= r_min))
        throw Error(ErrorCode::ConfigError, "geometric_radii: need 0 < r_min <= r_max");
    if (!(ratio > 1.0)) throw Error(ErrorCode::ConfigError, "geometric_radii: ratio must exceed 1");
    std::vector<double> out;
    for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= ratio) out.push_back(std::min(r, r_max));
    return out;
}

DoublingProfile frequency_profile(const Field& u, const Vec3& x,
                                  const std::vector<double>& radii) {
    if (radii.empty())
        throw Error(ErrorCode::ConfigError, "frequency_profile: empty radius grid");
    for (size_t i = 0; i < radii.size(); ++i) {
        require_positive_radius(radii[i], "frequency_profile");
        if (i > 0 && radii[i] <= radii[i - 1])
            throw Error(ErrorCode::ConfigError, "frequency_profile: radii must be increasing");
    }
    const Polytope& P = u.base_domain();
    if (!P.contains(x.xy()))
        throw Error(ErrorCode::PointOutsideDomain, "frequency_profile: center outside the domain");

    DoublingProfile prof;
    prof.center = x;
    prof.ambient_dim = u.ambient_dim();
    prof.floor = noise_floor(u);
    // the star hypothesis for the cylinder reduces to the planar certificate:
    // on ∂P x R, (y,s) - (x,t) meets the horizontal facet normal in (y-x).n(y)
    prof.certificate = star_certificate(P, x.xy(), 2.0 * radii.back());
    prof.certificate_ok = prof.certificate.star_shaped;

    for (double r : radii) {
        double m1 = u.ball_mass(x, r);
        double m2 = u.ball_mass(x, 2.0 * r);
        double h = u.sphere_mass(x, r);
        double d = u.dirichlet_energy(x, r);
        prof.radii.push_back(r);
        prof.mass.push_back(m1);
        prof.mass2.push_back(m2);
        prof.H.push_back(h);
        prof.D.push_back(d);
        bool noisy = m1 <= prof.floor || m2 <= prof.floor || h <= 0.0;
        prof.noise.push_back(noisy);
        prof.beta.push_back(noisy ? 0.0 : r * d / h);
        prof.N.push_back(noisy ? 0.0 : std::log2(m2 / m1));
    }
    return prof;
}

MonotonicityReport monotonicity_check(const DoublingProfile& profile, double tolerance) {
    MonotonicityReport rep;
    rep.certificate_ok = profile.certificate_ok;
    rep.tolerance = tolerance;
    for (size_t i = 0; i + 1 < profile.radii.size(); ++i) {
        if (profile.noise[i] || profile.noise[i + 1]) continue;
        rep.worst_n_violation = std::max(rep.worst_n_violation, profile.N[i] - profile.N[i + 1]);
        rep.worst_beta_violation =
            std::max(rep.worst_beta_violation, profile.beta[i] - profile.beta[i + 1]);
    }
    rep.pass = rep.certificate_ok && rep.worst_n_violation <= tolerance &&
               rep.worst_beta_violation <= tolerance;
    return rep;
}

FourSphereReport four_sphere_check(const Field& u, const Vec3& x, double tau, double t,
                                   double rel_tol) {
    if (!(tau > 0.0) || !(t > tau))
        throw Error(ErrorCode::ConfigError, "four_sphere_check: need 0 < tau < t");
    FourSphereReport rep;
    rep.tau = tau;
    rep.t = t;
    rep.certificate_ok = star_certificate(u.base_domain(), x.xy(), 2.0 * t).star_shaped;
    rep.h_tau = u.sphere_mass(x, tau);
    rep.h_2tau = u.sphere_mass(x, 2.0 * tau);
    rep.h_t = u.sphere_mass(x, t);
    rep.h_2t = u.sphere_mass(x, 2.0 * t);
    rep.lhs = rep.h_2tau * rep.h_t;
    rep.rhs = rep.h_tau * rep.h_2t;
    rep.rel_defect = rep.rhs > 0.0 ? (rep.lhs - rep.rhs) / rep.rhs
                                   : std::numeric_limits<double>::infinity();
    rep.holds = rep.rhs > 0.0 && rep.lhs <= rep.rhs * (1.0 + rel_tol + 1e-9);
    return rep;
}

double CurveSpec::length() const {
    double len = 0.0;
    for (size_t i = 0; i + 1 < vertices.size(); ++i) len += (vertices[i + 1] - vertices[i]).norm();
    return len;
}

PropagationReport propagation_check(const Field& u, const CurveSpec& curve) {
    const Polytope& P = u.base_domain();
    double tol = P.tolerance();

    // (i) endpoints and containment
    if (curve.vertices.empty())
        throw Error(ErrorCode::HypothesisFailure, "propagation: empty curve");
    if (!(curve.r > 0.0) || !(curve.R > 0.0) || curve.r > 0.25 * curve.R * (1.0 + 1e-12))
        throw Error(ErrorCode::HypothesisFailure, "propagation: need 0 < r <= R/4");
    if (!(curve.c1 > 1.0))
        throw Error(ErrorCode::HypothesisFailure, "propagation: need C1 > 1");
    if (curve.c2 < 0.0)
        throw Error(ErrorCode::HypothesisFailure, "propagation: need C2 >= 0");
    Vec3 base = curve.vertices.front();
    Vec3 x = curve.vertices.back();
    for (const Vec3& v : curve.vertices)
        if (!P.contains(v.xy()))
            throw Error(ErrorCode::HypothesisFailure, "propagation: curve leaves the domain");
    if ((x - base).norm() > 0.5 * curve.R + tol)
        throw Error(ErrorCode::HypothesisFailure, "propagation: x outside B(0, R/2)");

    // (ii) per-vertex star certificates at radius 4r, ball inside B(0, min(R, C1 r))
    double reach = std::min(curve.R, curve.c1 * curve.r);
    for (const Vec3& v : curve.vertices) {
        if ((v - base).norm() + 4.0 * curve.r > reach + tol)
            throw Error(ErrorCode::HypothesisFailure,
                        "propagation: B(gamma(s),4r) escapes B(0, min(R, C1 r))");
        StarCertificate cert = star_certificate(P, v.xy(), 4.0 * curve.r);
        if (!cert.star_shaped)
            throw Error(ErrorCode::HypothesisFailure,
                        "propagation: star certificate at radius 4r failed along the curve");
    }

    // (iii) length bound
    double len = curve.length();
    if (len > curve.c2 * curve.r + tol)
        throw Error(ErrorCode::HypothesisFailure, "propagation: |gamma| > C2 r");

    // (iv) star certificate for Omega ∩ B(0,R)
    if (!star_certificate(P, base.xy(), curve.R).star_shaped)
        throw Error(ErrorCode::HypothesisFailure,
                    "propagation: star certificate at B(0,R) failed");

    double floor = noise_floor(u);
    PropagationReport rep;
    rep.curve_length = len;
    rep.n_far = doubling(u, x, curve.r, floor);
    rep.n_base = doubling(u, base, 0.5 * curve.R, floor);
    rep.c_emp = rep.n_far / rep.n_base;
    rep.bound = (1.0 + std::log2(curve.c1)) * std::pow(2.0, curve.c2);
    rep.holds = rep.c_emp <= rep.bound * (1.0 + 1e-9);
    return rep;
}

double chart_working_constant(const Polytope& P, double scale) {
    double L = P.max_chart_lipschitz();
    return scale * std::sqrt(1.0 + L * L);  // = scale / l0
}

DoublingSurvey eigen_doubling_survey(std::shared_ptr<const Polytope> P,
                                     std::shared_ptr<const Mesh> mesh,
                                     const std::vector<EigenPair>& pairs,
                                     const std::vector<Vec3>& centers, double r) {
    require_positive_radius(r, "eigen_doubling_survey");
    for (const Vec3& c : centers) {
        if (std::abs(c.z) >= 1.0)
            throw Error(ErrorCode::ConfigError, "eigen_doubling_survey: centers need |t| < 1");
        if (!P->contains(c.xy()))
            throw Error(ErrorCode::PointOutsideDomain,
                        "eigen_doubling_survey: center outside the domain");
    }

    DoublingSurvey survey;
    for (const EigenPair& pair : pairs) {
        auto u = lift(eigen_field(P, mesh, pair), pair.lambda);
        double floor = noise_floor(*u);
        double sqrt_lambda = std::sqrt(pair.lambda);
        double sup = 0.0;
        bool any = false;
        for (const Vec3& c : centers) {
            SurveyEntry e;
            e.eigen_index = pair.index;
            e.lambda = pair.lambda;
            e.center = c;
            e.r = r;
            try {
                e.n = doubling(*u, c, r, floor);
                e.ratio = e.n / sqrt_lambda;
                sup = std::max(sup, e.ratio);
                any = true;
            } catch (const Error& err) {
                if (err.code() != ErrorCode::NoiseFloor) throw;
                e.noise = true;
            }
            survey.entries.push_back(e);
        }
        survey.sup_ratio.emplace_back(pair.lambda, any ? sup : 0.0);
    }
    return survey;
}

}  // namespace polynodal

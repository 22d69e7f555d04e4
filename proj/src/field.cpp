#include "polynodal/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "polynodal/quadrature.hpp"

namespace polynodal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

}  // namespace

// ---------------------------------------------------------------------------
// AnalyticPlanarField

AnalyticPlanarField::AnalyticPlanarField(Polytope domain,
                                         std::function<double(const Vec2&)> value,
                                         std::function<Vec2(const Vec2&)> gradient,
                                         int radial_order)
    : domain_(std::move(domain)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      radial_order_(radial_order) {}

double AnalyticPlanarField::ray_exit(const Vec2& c, double theta) const {
    Vec2 d{std::cos(theta), std::sin(theta)};
    double best = std::numeric_limits<double>::infinity();
    int m = static_cast<int>(domain_.facet_count());
    for (int f = 0; f < m; ++f) {
        Vec2 a = domain_.edge_a(f), e = domain_.edge_b(f) - domain_.edge_a(f);
        double det = d.cross(e) * -1.0;  // solve c + s d = a + t e
        if (std::abs(det) < 1e-15) continue;
        Vec2 w = a - c;
        double s = (w.x * -e.y + w.y * e.x) / det;
        double t = (d.x * w.y - d.y * w.x) / det;
        if (t >= -1e-12 && t <= 1.0 + 1e-12 && s > 1e-12) best = std::min(best, s);
    }
    return best;
}

std::vector<double> AnalyticPlanarField::breakpoints(const Vec2& c, double r) const {
    std::vector<double> br;
    int m = static_cast<int>(domain_.facet_count());
    for (int v = 0; v < m; ++v) {
        Vec2 p = domain_.vertex(v);
        if ((p - c).norm() < r) br.push_back(wrap_angle(std::atan2(p.y - c.y, p.x - c.x)));
    }
    for (int f = 0; f < m; ++f) {
        Vec2 a = domain_.edge_a(f), b = domain_.edge_b(f);
        SegmentDiskInterval iv = segment_disk_interval(a, b, c, r);
        if (iv.empty) continue;
        for (double t : {iv.t0, iv.t1}) {
            if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;  // interior crossings only
            Vec2 p = a + (b - a) * t;
            if (std::abs((p - c).norm() - r) < 1e-9 * r)
                br.push_back(wrap_angle(std::atan2(p.y - c.y, p.x - c.x)));
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             br.end());
    return br;
}

double AnalyticPlanarField::polar_integral(const Vec2& c, double r,
                                           const std::function<double(const Vec2&)>& f) const {
    std::vector<double> br = breakpoints(c, r);
    if (br.empty()) br.push_back(0.0);
    const GaussRule& outer = gauss_legendre(32);
    const GaussRule& inner = gauss_legendre(radial_order_);
    double total = 0.0;
    size_t nb = br.size();
    for (size_t i = 0; i < nb; ++i) {
        double a0 = br[i];
        double a1 = (i + 1 < nb) ? br[i + 1] : br[0] + kTwoPi;
        if (a1 - a0 < 1e-14) continue;
        // rays of this panel either start into the domain or away from it
        // (clipped balls are star-shaped about c): probe the mid direction
        double midang = 0.5 * (a0 + a1);
        Vec2 middir{std::cos(midang), std::sin(midang)};
        double probe = 0.5 * std::min(r, ray_exit(c, midang));
        if (!domain_.contains(c + middir * probe)) continue;
        int chunks = std::max(1, static_cast<int>(std::ceil((a1 - a0) / (std::numbers::pi / 8))));
        for (int k = 0; k < chunks; ++k) {
            double b0 = a0 + (a1 - a0) * k / chunks;
            double b1 = a0 + (a1 - a0) * (k + 1) / chunks;
            double mid = 0.5 * (b0 + b1), half = 0.5 * (b1 - b0);
            for (size_t q = 0; q < outer.nodes.size(); ++q) {
                double th = mid + half * outer.nodes[q];
                double R = std::min(r, ray_exit(c, th));
                if (R <= 0.0) continue;
                Vec2 dir{std::cos(th), std::sin(th)};
                double radial = 0.0;
                for (size_t j = 0; j < inner.nodes.size(); ++j) {
                    double rho = 0.5 * R * (1.0 + inner.nodes[j]);
                    radial += inner.weights[j] * f(c + dir * rho) * rho;
                }
                radial *= 0.5 * R;
                total += outer.weights[q] * half * radial;
            }
        }
    }
    return total;
}

double AnalyticPlanarField::disk_mass(const Vec2& c, double r) const {
    return polar_integral(c, r, [this](const Vec2& p) {
        double v = value_(p);
        return v * v;
    });
}

double AnalyticPlanarField::disk_gradient_energy(const Vec2& c, double r) const {
    return polar_integral(c, r, [this](const Vec2& p) { return gradient_(p).squaredNorm(); });
}

double AnalyticPlanarField::circle_mass_angular(const Vec2& c, double r) const {
    if (r == 0.0) {
        double v = value_(c);
        return domain_.contains(c) ? kTwoPi * v * v : 0.0;
    }
    std::vector<double> br = breakpoints(c, r);
    if (br.empty()) br.push_back(0.0);
    const GaussRule& rule = gauss_legendre(32);
    double total = 0.0;
    size_t nb = br.size();
    for (size_t i = 0; i < nb; ++i) {
        double a0 = br[i];
        double a1 = (i + 1 < nb) ? br[i + 1] : br[0] + kTwoPi;
        if (a1 - a0 < 1e-14) continue;
        double midang = 0.5 * (a0 + a1);
        Vec2 midpt = c + Vec2{std::cos(midang), std::sin(midang)} * r;
        if (!domain_.contains(midpt)) continue;
        int chunks = std::max(1, static_cast<int>(std::ceil((a1 - a0) / (std::numbers::pi / 8))));
        for (int k = 0; k < chunks; ++k) {
            double b0 = a0 + (a1 - a0) * k / chunks;
            double b1 = a0 + (a1 - a0) * (k + 1) / chunks;
            double mid = 0.5 * (b0 + b1), half = 0.5 * (b1 - b0);
            for (size_t q = 0; q < rule.nodes.size(); ++q) {
                double th = mid + half * rule.nodes[q];
                double v = value_(c + Vec2{std::cos(th), std::sin(th)} * r);
                total += rule.weights[q] * half * v * v;
            }
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// DiscretePlanarField

DiscretePlanarField::DiscretePlanarField(std::shared_ptr<const Polytope> domain,
                                         std::shared_ptr<const Mesh> mesh,
                                         std::vector<double> node_values)
    : domain_(std::move(domain)), mesh_(std::move(mesh)), values_(std::move(node_values)) {
    if (values_.size() != mesh_->nodes.size())
        throw Error(ErrorCode::ConfigError, "DiscretePlanarField: value/node count mismatch");
    tri_bbox_.reserve(mesh_->triangles.size());
    for (const MeshTriangle& t : mesh_->triangles) {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (int e = 0; e < 3; ++e) {
            Vec2 p = mesh_->nodes[static_cast<size_t>(t.v[static_cast<size_t>(e)])];
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        tri_bbox_.push_back({x0, x1, y0, y1});
    }
}

void DiscretePlanarField::plane(int t, double& a, double& b, double& c) const {
    const MeshTriangle& tr = mesh_->triangles[static_cast<size_t>(t)];
    Vec2 p0 = mesh_->nodes[static_cast<size_t>(tr.v[0])];
    Vec2 p1 = mesh_->nodes[static_cast<size_t>(tr.v[1])];
    Vec2 p2 = mesh_->nodes[static_cast<size_t>(tr.v[2])];
    double u0 = values_[static_cast<size_t>(tr.v[0])];
    double u1 = values_[static_cast<size_t>(tr.v[1])];
    double u2 = values_[static_cast<size_t>(tr.v[2])];
    Vec2 e1 = p1 - p0, e2 = p2 - p0;
    double det = e1.cross(e2);
    a = ((u1 - u0) * e2.y - (u2 - u0) * e1.y) / det;
    b = ((u2 - u0) * e1.x - (u1 - u0) * e2.x) / det;
    c = u0 - a * p0.x - b * p0.y;
}

double DiscretePlanarField::value(const Vec2& p) const {
    int t = mesh_->locate(p, 1e-7);
    if (t < 0) {
        if (!domain_->contains(p))
            throw Error(ErrorCode::PointOutsideDomain, "DiscretePlanarField::value");
        t = mesh_->locate(p, 1e-3);
        if (t < 0) throw Error(ErrorCode::PointOutsideDomain, "DiscretePlanarField::value");
    }
    double a, b, c;
    plane(t, a, b, c);
    return a * p.x + b * p.y + c;
}

Vec2 DiscretePlanarField::gradient(const Vec2& p) const {
    int t = mesh_->locate(p, 1e-7);
    if (t < 0) throw Error(ErrorCode::PointOutsideDomain, "DiscretePlanarField::gradient");
    double a, b, c;
    plane(t, a, b, c);
    return {a, b};
}

double DiscretePlanarField::disk_mass(const Vec2& c, double r) const {
    double total = 0.0;
    for (size_t t = 0; t < mesh_->triangles.size(); ++t) {
        const auto& bb = tri_bbox_[t];
        if (bb[0] > c.x + r || bb[1] < c.x - r || bb[2] > c.y + r || bb[3] < c.y - r) continue;
        double a, b, c0;
        plane(static_cast<int>(t), a, b, c0);
        Quadratic q{c0 * c0, 2 * a * c0, 2 * b * c0, a * a, 2 * a * b, b * b};
        const MeshTriangle& tr = mesh_->triangles[t];
        total += integrate_quadratic_triangle_disk(
            mesh_->nodes[static_cast<size_t>(tr.v[0])], mesh_->nodes[static_cast<size_t>(tr.v[1])],
            mesh_->nodes[static_cast<size_t>(tr.v[2])], c, r, q);
    }
    return total;
}

double DiscretePlanarField::disk_gradient_energy(const Vec2& c, double r) const {
    double total = 0.0;
    for (size_t t = 0; t < mesh_->triangles.size(); ++t) {
        const auto& bb = tri_bbox_[t];
        if (bb[0] > c.x + r || bb[1] < c.x - r || bb[2] > c.y + r || bb[3] < c.y - r) continue;
        double a, b, c0;
        plane(static_cast<int>(t), a, b, c0);
        const MeshTriangle& tr = mesh_->triangles[t];
        double area = triangle_disk_area(mesh_->nodes[static_cast<size_t>(tr.v[0])],
                                         mesh_->nodes[static_cast<size_t>(tr.v[1])],
                                         mesh_->nodes[static_cast<size_t>(tr.v[2])], c, r);
        total += (a * a + b * b) * area;
    }
    return total;
}

double DiscretePlanarField::circle_mass_angular(const Vec2& c, double r) const {
    if (r == 0.0) {
        if (!domain_->contains(c)) return 0.0;
        double v = value(c);
        return kTwoPi * v * v;
    }
    // crossing angles of the circle with the polygon boundary
    std::vector<double> br;
    int m = static_cast<int>(domain_->facet_count());
    for (int f = 0; f < m; ++f) {
        Vec2 a = domain_->edge_a(f), b = domain_->edge_b(f);
        SegmentDiskInterval iv = segment_disk_interval(a, b, c, r);
        if (iv.empty) continue;
        for (double t : {iv.t0, iv.t1}) {
            Vec2 p = a + (b - a) * t;
            if (std::abs((p - c).norm() - r) < 1e-9 * r)
                br.push_back(wrap_angle(std::atan2(p.y - c.y, p.x - c.x)));
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             br.end());
    if (br.empty()) br.push_back(0.0);

    const GaussRule& rule = gauss_legendre(8);
    double chunk_ang = std::min(std::numbers::pi / 8, 0.5 * mesh_->h / r);
    double total = 0.0;
    size_t nb = br.size();
    for (size_t i = 0; i < nb; ++i) {
        double a0 = br[i];
        double a1 = (i + 1 < nb) ? br[i + 1] : br[0] + kTwoPi;
        if (a1 - a0 < 1e-14) continue;
        double midang = 0.5 * (a0 + a1);
        Vec2 midpt = c + Vec2{std::cos(midang), std::sin(midang)} * r;
        if (!domain_->contains(midpt)) continue;
        int chunks = std::max(1, static_cast<int>(std::ceil((a1 - a0) / chunk_ang)));
        for (int k = 0; k < chunks; ++k) {
            double b0 = a0 + (a1 - a0) * k / chunks;
            double b1 = a0 + (a1 - a0) * (k + 1) / chunks;
            double mid = 0.5 * (b0 + b1), half = 0.5 * (b1 - b0);
            for (size_t q = 0; q < rule.nodes.size(); ++q) {
                double th = mid + half * rule.nodes[q];
                Vec2 p = c + Vec2{std::cos(th), std::sin(th)} * r;
                int t = mesh_->locate(p, 1e-6);
                if (t < 0) continue;
                double pa, pb, pc;
                plane(t, pa, pb, pc);
                double v = pa * p.x + pb * p.y + pc;
                total += rule.weights[q] * half * v * v;
            }
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// LiftedField

LiftedField::LiftedField(std::shared_ptr<const PlanarField> base, double lambda)
    : base_(std::move(base)), lambda_(lambda), sqrt_lambda_(std::sqrt(lambda)) {
    if (lambda <= 0.0) throw Error(ErrorCode::ConfigError, "LiftedField: lambda must be positive");
}

double LiftedField::value(const Vec3& p) const {
    return std::exp(p.z * sqrt_lambda_) * base_->value(p.xy());
}

namespace {

// ∫_{-π/2}^{π/2} g(s) ds by composite Gauss panels sized to the exponential
// scale r√λ of the lifted integrands.
double polar_t_integral(double r, double sqrt_lambda, const std::function<double(double)>& g) {
    int panels = std::max(8, static_cast<int>(std::ceil(2.0 * r * sqrt_lambda)));
    const GaussRule& rule = gauss_legendre(16);
    double total = 0.0;
    double a = -std::numbers::pi / 2, b = std::numbers::pi / 2;
    for (int k = 0; k < panels; ++k) {
        double p0 = a + (b - a) * k / panels;
        double p1 = a + (b - a) * (k + 1) / panels;
        double mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
        for (size_t q = 0; q < rule.nodes.size(); ++q)
            total += rule.weights[q] * half * g(mid + half * rule.nodes[q]);
    }
    return total;
}

}  // namespace

double LiftedField::ball_mass(const Vec3& c, double r) const {
    // slice at t = c.z + r sin s: disk of radius r cos s
    return polar_t_integral(r, sqrt_lambda_, [&](double s) {
        double rho = r * std::cos(s);
        double t = c.z + r * std::sin(s);
        return std::exp(2.0 * t * sqrt_lambda_) * base_->disk_mass(c.xy(), rho) * r * std::cos(s);
    });
}

double LiftedField::sphere_mass(const Vec3& c, double r) const {
    return polar_t_integral(r, sqrt_lambda_, [&](double s) {
        double rho = r * std::cos(s);
        double t = c.z + r * std::sin(s);
        return std::exp(2.0 * t * sqrt_lambda_) * base_->circle_mass_angular(c.xy(), rho) * r * r *
               std::cos(s);
    });
}

double LiftedField::dirichlet_energy(const Vec3& c, double r) const {
    // |∇u|² = e^{2t√λ} (|∇φ|² + λ φ²)
    return polar_t_integral(r, sqrt_lambda_, [&](double s) {
        double rho = r * std::cos(s);
        double t = c.z + r * std::sin(s);
        double inner = base_->disk_gradient_energy(c.xy(), rho) +
                       lambda_ * base_->disk_mass(c.xy(), rho);
        return std::exp(2.0 * t * sqrt_lambda_) * inner * r * std::cos(s);
    });
}

// ---------------------------------------------------------------------------
// analytic builders

SquareMode exact_square_mode(int k, int m, double a, double b) {
    if (k < 1 || m < 1) throw Error(ErrorCode::ConfigError, "exact_square_mode: k,m >= 1");
    Polytope rect = make_rectangle(a, b);
    double kk = k * std::numbers::pi / a;
    double mm = m * std::numbers::pi / b;
    SquareMode mode;
    mode.lambda = kk * kk + mm * mm;
    mode.field = std::make_shared<AnalyticPlanarField>(
        std::move(rect),
        [kk, mm](const Vec2& p) { return std::sin(kk * p.x) * std::sin(mm * p.y); },
        [kk, mm](const Vec2& p) {
            return Vec2{kk * std::cos(kk * p.x) * std::sin(mm * p.y),
                        mm * std::sin(kk * p.x) * std::cos(mm * p.y)};
        });
    return mode;
}

std::shared_ptr<AnalyticPlanarField> harmonic_polynomial_field(int k, Polytope domain) {
    if (k < 1) throw Error(ErrorCode::ConfigError, "harmonic_polynomial_field: k >= 1");
    auto val = [k](const Vec2& p) {
        return std::pow(std::complex<double>(p.x, p.y), k).real();
    };
    auto grad = [k](const Vec2& p) {
        std::complex<double> w = std::pow(std::complex<double>(p.x, p.y), k - 1);
        return Vec2{k * w.real(), -k * w.imag()};
    };
    return std::make_shared<AnalyticPlanarField>(std::move(domain), val, grad);
}

}  // namespace polynodal

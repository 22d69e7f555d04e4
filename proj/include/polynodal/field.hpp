#pragma once

#include <functional>
#include <memory>

#include "polynodal/mesh.hpp"
#include "polynodal/polytope.hpp"

namespace polynodal {

// Scalar field on a polygon with the clipped-ball integrals the doubling
// analysis needs. Quadrature targets 1e-9 relative accuracy.
class PlanarField {
public:
    virtual ~PlanarField() = default;

    virtual const Polytope& domain() const = 0;
    virtual double value(const Vec2& p) const = 0;
    virtual Vec2 gradient(const Vec2& p) const = 0;

    // ∫_{B_r(c) ∩ P} u² dx
    virtual double disk_mass(const Vec2& c, double r) const = 0;
    // ∫_{B_r(c) ∩ P} |∇u|² dx
    virtual double disk_gradient_energy(const Vec2& c, double r) const = 0;
    // ∫_{θ : c + r e(θ) ∈ P} u(c + r e(θ))² dθ   (so H(r) = r * this)
    virtual double circle_mass_angular(const Vec2& c, double r) const = 0;
};

// Closed-form field; disk integrals in polar form with panel splits at the
// boundary-crossing angles. Requires the clipped balls to be star-shaped
// about their centers (true for the calibration configurations).
class AnalyticPlanarField : public PlanarField {
public:
    AnalyticPlanarField(Polytope domain, std::function<double(const Vec2&)> value,
                        std::function<Vec2(const Vec2&)> gradient, int radial_order = 24);

    const Polytope& domain() const override { return domain_; }
    double value(const Vec2& p) const override { return value_(p); }
    Vec2 gradient(const Vec2& p) const override { return gradient_(p); }
    double disk_mass(const Vec2& c, double r) const override;
    double disk_gradient_energy(const Vec2& c, double r) const override;
    double circle_mass_angular(const Vec2& c, double r) const override;

    // distance to the first boundary hit along direction θ from c
    double ray_exit(const Vec2& c, double theta) const;

private:
    double polar_integral(const Vec2& c, double r,
                          const std::function<double(const Vec2&)>& f) const;
    std::vector<double> breakpoints(const Vec2& c, double r) const;

    Polytope domain_;
    std::function<double(const Vec2&)> value_;
    std::function<Vec2(const Vec2&)> gradient_;
    int radial_order_;
};

// P1 interpolant over a mesh; clipped integrals are exact per triangle.
class DiscretePlanarField : public PlanarField {
public:
    DiscretePlanarField(std::shared_ptr<const Polytope> domain, std::shared_ptr<const Mesh> mesh,
                        std::vector<double> node_values);

    const Polytope& domain() const override { return *domain_; }
    const Mesh& mesh() const { return *mesh_; }
    const std::vector<double>& node_values() const { return values_; }

    double value(const Vec2& p) const override;
    Vec2 gradient(const Vec2& p) const override;
    double disk_mass(const Vec2& c, double r) const override;
    double disk_gradient_energy(const Vec2& c, double r) const override;
    double circle_mass_angular(const Vec2& c, double r) const override;

    // plane coefficients u = a x + b y + c on triangle t
    void plane(int t, double& a, double& b, double& c) const;

private:
    std::shared_ptr<const Polytope> domain_;
    std::shared_ptr<const Mesh> mesh_;
    std::vector<double> values_;
    std::vector<std::array<double, 4>> tri_bbox_;  // x0,x1,y0,y1 per triangle
};

// Field over the ambient space of the doubling analysis: the polygon itself
// (n=2) or its cylinder P×R carrying a harmonic lifting (n=3).
class Field {
public:
    virtual ~Field() = default;
    virtual int ambient_dim() const = 0;
    virtual const Polytope& base_domain() const = 0;
    virtual double value(const Vec3& p) const = 0;
    virtual double ball_mass(const Vec3& c, double r) const = 0;
    virtual double sphere_mass(const Vec3& c, double r) const = 0;       // H(r)
    virtual double dirichlet_energy(const Vec3& c, double r) const = 0;  // D(r)

    // domain-wide mass used as the noise-floor reference scale
    virtual double reference_mass() const {
        const Polytope& P = base_domain();
        return ball_mass(Vec3{P.interior_point(), 0.0}, P.diameter());
    }
};

// n=2 adapter: balls are disks, spheres are circles.
class PlanarAdapterField : public Field {
public:
    explicit PlanarAdapterField(std::shared_ptr<const PlanarField> base) : base_(std::move(base)) {}

    int ambient_dim() const override { return 2; }
    const Polytope& base_domain() const override { return base_->domain(); }
    double value(const Vec3& p) const override { return base_->value(p.xy()); }
    double ball_mass(const Vec3& c, double r) const override {
        return base_->disk_mass(c.xy(), r);
    }
    double sphere_mass(const Vec3& c, double r) const override {
        return r * base_->circle_mass_angular(c.xy(), r);
    }
    double dirichlet_energy(const Vec3& c, double r) const override {
        return base_->disk_gradient_energy(c.xy(), r);
    }
    const PlanarField& base() const { return *base_; }

private:
    std::shared_ptr<const PlanarField> base_;
};

// u(x,t) = e^{t√λ} φ(x), harmonic on P×R when -Δφ = λφ; 3D ball integrals
// reduce to 1D quadrature in t over clipped 2D integrals.
class LiftedField : public Field {
public:
    LiftedField(std::shared_ptr<const PlanarField> base, double lambda);

    int ambient_dim() const override { return 3; }
    const Polytope& base_domain() const override { return base_->domain(); }
    double lambda() const { return lambda_; }
    double value(const Vec3& p) const override;
    double dt_value(const Vec3& p) const { return std::sqrt(lambda_) * value(p); }
    double ball_mass(const Vec3& c, double r) const override;
    double sphere_mass(const Vec3& c, double r) const override;
    double dirichlet_energy(const Vec3& c, double r) const override;
    // planar mass of φ: λ-independent, unlike any cylinder ball of the
    // exponentially growing lift
    double reference_mass() const override {
        const Polytope& P = base_->domain();
        return base_->disk_mass(P.interior_point(), P.diameter());
    }
    const PlanarField& base() const { return *base_; }

private:
    std::shared_ptr<const PlanarField> base_;
    double lambda_;
    double sqrt_lambda_;
};

// φ(x,y) = sin(kπx/a) sin(mπy/b) on the rectangle (0,a)×(0,b), λ = π²(k²/a²+m²/b²)
struct SquareMode {
    double lambda = 0.0;
    std::shared_ptr<AnalyticPlanarField> field;
};
SquareMode exact_square_mode(int k, int m, double a = 1.0, double b = 1.0);

// u = Re(z^k) restricted to `domain`; harmonic and homogeneous of degree k.
std::shared_ptr<AnalyticPlanarField> harmonic_polynomial_field(int k, Polytope domain);

}  // namespace polynodal

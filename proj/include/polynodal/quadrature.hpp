#pragma once

#include <functional>
#include <vector>

#include "polynodal/common.hpp"

namespace polynodal {

// Gauss-Legendre rule on [-1,1]; computed once per order and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Gauss-Kronrod-style bisection (GL-7 vs GL-15 error estimate).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_depth = 48);

// q(x,y) = c0 + cx x + cy y + cxx x^2 + cxy xy + cyy y^2
struct Quadratic {
    double c0 = 0, cx = 0, cy = 0, cxx = 0, cxy = 0, cyy = 0;

    double operator()(const Vec2& p) const {
        return c0 + cx * p.x + cy * p.y + cxx * p.x * p.x + cxy * p.x * p.y + cyy * p.y * p.y;
    }
};

// Integral of a quadratic over triangle ∩ disk, exact up to short-arc
// Gauss error (~1e-15 relative): Green's theorem on the clipped boundary.
double integrate_quadratic_triangle_disk(Vec2 A, Vec2 B, Vec2 C, const Vec2& center,
                                         double r, const Quadratic& q);

// Exact integral of a quadratic over a (whole) triangle.
double integrate_quadratic_triangle(const Vec2& A, const Vec2& B, const Vec2& C,
                                    const Quadratic& q);

// Area of triangle ∩ disk.
double triangle_disk_area(const Vec2& A, const Vec2& B, const Vec2& C, const Vec2& center,
                          double r);

// ∫_0^{2π} f(θ) dθ by the uniform trapezoid rule (spectrally accurate;
// exact for trigonometric polynomials of degree < n/2).
double integrate_circle(const std::function<double(double)>& f, int n = 64);

}  // namespace polynodal

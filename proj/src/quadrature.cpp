#include "polynodal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

namespace polynodal {

namespace {

GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<size_t>(i)] = -x;
        rule.weights[static_cast<size_t>(i)] = w;
        rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<size_t>(n - 1 - i)] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double budget, int depth, int max_depth) {
    double coarse = integrate_gl(f, a, b, 8);
    double fine = integrate_gl(f, a, b, 16);
    if (std::abs(fine - coarse) <= budget || depth >= max_depth) return fine;
    double mid = 0.5 * (a + b);
    return adaptive_rec(f, a, mid, 0.5 * budget, depth + 1, max_depth) +
           adaptive_rec(f, mid, b, 0.5 * budget, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    double scale = std::abs(integrate_gl(f, a, b, 16));
    // fallback scale for integrals with heavy cancellation on the whole range
    double mid = 0.5 * (a + b);
    scale = std::max({scale, std::abs(integrate_gl(f, a, mid, 16)),
                      std::abs(integrate_gl(f, mid, b, 16)), 1e-300});
    return adaptive_rec(f, a, b, rel_tol * scale, 0, max_depth);
}

namespace {

// Q(x,y) = ∫_0^x q(s,y) ds, the Green's-theorem potential with ∂Q/∂x = q.
double potential(const Quadratic& q, const Vec2& p) {
    double x = p.x, y = p.y;
    return q.c0 * x + q.cx * x * x / 2 + q.cy * x * y + q.cxx * x * x * x / 3 +
           q.cxy * x * x * y / 2 + q.cyy * x * y * y;
}

// ∮ Q dy along a straight segment: the integrand is cubic in t, so GL-2 is exact.
double segment_flux(const Quadratic& q, const Vec2& a, const Vec2& b) {
    const GaussRule& rule = gauss_legendre(2);
    double sum = 0.0;
    for (size_t i = 0; i < 2; ++i) {
        double t = 0.5 + 0.5 * rule.nodes[i];
        sum += rule.weights[i] * potential(q, a + (b - a) * t);
    }
    return 0.5 * sum * (b.y - a.y);
}

// ∮ Q dy along the CCW circle arc [th0, th1] (th1 > th0) of B_r(c).
double arc_flux(const Quadratic& q, const Vec2& c, double r, double th0, double th1) {
    int pieces = std::max(1, static_cast<int>(std::ceil((th1 - th0) / (std::numbers::pi / 2))));
    const GaussRule& rule = gauss_legendre(16);
    double sum = 0.0;
    for (int k = 0; k < pieces; ++k) {
        double a = th0 + (th1 - th0) * k / pieces;
        double b = th0 + (th1 - th0) * (k + 1) / pieces;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double th = mid + half * rule.nodes[i];
            Vec2 p{c.x + r * std::cos(th), c.y + r * std::sin(th)};
            sum += rule.weights[i] * potential(q, p) * r * std::cos(th) * half;
        }
    }
    return sum;
}

bool point_in_triangle(const Vec2& p, const Vec2& A, const Vec2& B, const Vec2& C) {
    double d1 = (B - A).cross(p - A);
    double d2 = (C - B).cross(p - B);
    double d3 = (A - C).cross(p - C);
    return d1 >= 0 && d2 >= 0 && d3 >= 0;  // assumes CCW triangle
}

}  // namespace

double integrate_quadratic_triangle(const Vec2& A, const Vec2& B, const Vec2& C,
                                    const Quadratic& q) {
    double area = 0.5 * std::abs((B - A).cross(C - A));
    // edge-midpoint rule: exact for quadratics
    return area / 3.0 * (q((A + B) * 0.5) + q((B + C) * 0.5) + q((C + A) * 0.5));
}

double integrate_quadratic_triangle_disk(Vec2 A, Vec2 B, Vec2 C, const Vec2& center,
                                         double r, const Quadratic& q) {
    if ((B - A).cross(C - A) < 0) std::swap(B, C);
    const Vec2 v[3] = {A, B, C};

    struct Piece {
        Vec2 a, b;
    };
    std::vector<Piece> pieces;
    bool any = false, all_full = true;
    for (int e = 0; e < 3; ++e) {
        SegmentDiskInterval iv = segment_disk_interval(v[e], v[(e + 1) % 3], center, r);
        if (iv.empty) {
            all_full = false;
            continue;
        }
        any = true;
        if (iv.t0 > 1e-12 || iv.t1 < 1.0 - 1e-12) all_full = false;
        Vec2 d = v[(e + 1) % 3] - v[e];
        pieces.push_back({v[e] + d * iv.t0, v[e] + d * iv.t1});
    }
    if (!any) {
        if (point_in_triangle(center, A, B, C) && r > 0.0)
            return arc_flux(q, center, r, 0.0, 2.0 * std::numbers::pi);
        return 0.0;
    }
    if (all_full && pieces.size() == 3)
        return segment_flux(q, A, B) + segment_flux(q, B, C) + segment_flux(q, C, A);

    double total = 0.0;
    double join_tol = 1e-9 * r;
    for (size_t i = 0; i < pieces.size(); ++i) {
        total += segment_flux(q, pieces[i].a, pieces[i].b);
        const Vec2& exit = pieces[i].b;
        const Vec2& entry = pieces[(i + 1) % pieces.size()].a;
        if ((exit - entry).norm() <= join_tol) continue;
        double th0 = std::atan2(exit.y - center.y, exit.x - center.x);
        double th1 = std::atan2(entry.y - center.y, entry.x - center.x);
        if (th1 <= th0) th1 += 2.0 * std::numbers::pi;
        total += arc_flux(q, center, r, th0, th1);
    }
    return total;
}

double triangle_disk_area(const Vec2& A, const Vec2& B, const Vec2& C, const Vec2& center,
                          double r) {
    return integrate_quadratic_triangle_disk(A, B, C, center, r, Quadratic{1, 0, 0, 0, 0, 0});
}

double integrate_circle(const std::function<double(double)>& f, int n) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += f(2.0 * std::numbers::pi * k / n);
    return sum * 2.0 * std::numbers::pi / n;
}

}  // namespace polynodal

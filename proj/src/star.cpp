#include "polynodal/star.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polynodal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::optional<std::pair<double, double>> edge_disk_interval(const Vec2& a, const Vec2& b,
                                                            const Vec2& x, double r) {
    SegmentDiskInterval iv = segment_disk_interval(a, b, x, r);
    if (iv.empty) return std::nullopt;
    return std::make_pair(iv.t0, iv.t1);
}

double angle_of(const Vec2& v) { return std::atan2(v.y, v.x); }

// CCW angular length from a to b in (0, 2*pi].
double ccw_span(double a, double b) {
    double s = std::fmod(b - a, kTwoPi);
    if (s <= 0.0) s += kTwoPi;
    return s;
}

struct Chain {
    std::vector<BoundaryPiece> pieces;
    Vec2 entry, exit;
    double entry_angle = 0.0, exit_angle = 0.0;
};

struct Loop {
    std::vector<BoundaryPiece> segments;
    std::vector<std::pair<double, double>> arcs;  // (from_angle, ccw span)
};

double loop_distance(const Loop& L, const Vec2& q, const Vec2& center, double r) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : L.segments)
        best = std::min(best, point_segment_distance(q, s.a, s.b));
    for (const auto& [from, span] : L.arcs) {
        Vec2 d = q - center;
        double rho = d.norm();
        double th = angle_of(d);
        if (rho > 0.0 && ccw_span(from, th) <= span) {
            best = std::min(best, std::abs(rho - r));
        } else {
            Vec2 p0 = center + Vec2{std::cos(from), std::sin(from)} * r;
            Vec2 p1 = center + Vec2{std::cos(from + span), std::sin(from + span)} * r;
            best = std::min({best, (q - p0).norm(), (q - p1).norm()});
        }
    }
    return best;
}

// Inward direction at a boundary point (edge normal or vertex bisector).
Vec2 inward_direction(const Polytope& P, const Vec2& x) {
    double tol = 1e-9 * P.diameter();
    int v = P.vertex_near(x, tol);
    if (v >= 0) {
        int m = static_cast<int>(P.facet_count());
        int prev = (v + m - 1) % m;
        Vec2 d = P.facet_normal(prev) + P.facet_normal(v);
        if (d.norm() < 1e-12) d = P.facet_normal(v).perp();
        return d.normalized() * -1.0;
    }
    int f = P.facet_containing(x, tol);
    if (f >= 0) return P.facet_normal(f) * -1.0;
    return {0.0, 0.0};
}

}  // namespace

ComponentBoundary component_boundary(const Polytope& P, const Vec2& x, double r) {
    if (P.dimension() != 2)
        throw Error(ErrorCode::ConfigError, "component_boundary: 2D polytopes only");
    if (r <= 0.0) throw Error(ErrorCode::NonPositiveRadius, "component_boundary: r <= 0");
    if (!P.contains(x))
        throw Error(ErrorCode::PointOutsideDomain, "component_boundary: center outside polytope");

    int m = static_cast<int>(P.facet_count());
    std::vector<std::optional<std::pair<double, double>>> iv(static_cast<size_t>(m));
    for (int f = 0; f < m; ++f)
        iv[static_cast<size_t>(f)] = edge_disk_interval(P.edge_a(f), P.edge_b(f), x, r);

    ComponentBoundary out;
    bool any = false, all_full = true;
    for (int f = 0; f < m; ++f) {
        const auto& i = iv[static_cast<size_t>(f)];
        if (i) any = true;
        if (!i || i->first > 1e-12 || i->second < 1.0 - 1e-12) all_full = false;
    }
    if (!any) {
        out.pure_disk = true;  // disk does not touch the boundary
        return out;
    }
    if (all_full) {
        out.whole_polygon = true;
        for (int f = 0; f < m; ++f) out.segments.push_back({f, P.edge_a(f), P.edge_b(f)});
        return out;
    }

    auto linked = [&](int f) {  // does edge f continue into edge f+1 inside the disk?
        int g = (f + 1) % m;
        const auto &a = iv[static_cast<size_t>(f)], &b = iv[static_cast<size_t>(g)];
        return a && b && a->second > 1.0 - 1e-12 && b->first < 1e-12;
    };

    // Maximal runs of consecutive in-disk sub-segments.
    std::vector<Chain> chains;
    std::vector<bool> used(static_cast<size_t>(m), false);
    for (int f0 = 0; f0 < m; ++f0) {
        if (!iv[static_cast<size_t>(f0)] || used[static_cast<size_t>(f0)]) continue;
        if (linked((f0 + m - 1) % m)) continue;  // not a chain head
        Chain c;
        int f = f0;
        while (true) {
            used[static_cast<size_t>(f)] = true;
            auto [t0, t1] = *iv[static_cast<size_t>(f)];
            Vec2 a = P.edge_a(f), b = P.edge_b(f);
            c.pieces.push_back({f, a + (b - a) * t0, a + (b - a) * t1});
            if (!linked(f)) break;
            f = (f + 1) % m;
            if (f == f0) break;  // closed run (shouldn't happen: all_full caught above)
        }
        c.entry = c.pieces.front().a;
        c.exit = c.pieces.back().b;
        c.entry_angle = angle_of(c.entry - x);
        c.exit_angle = angle_of(c.exit - x);
        chains.push_back(std::move(c));
    }

    if (chains.empty()) {  // only tangential touches: effectively an interior disk
        out.pure_disk = true;
        return out;
    }

    // Stitch chains into loops: each chain exit continues CCW along the circle
    // to the nearest chain entry.
    size_t nc = chains.size();
    std::vector<int> next(nc, -1);
    for (size_t i = 0; i < nc; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < nc; ++j) {
            double s = ccw_span(chains[i].exit_angle, chains[j].entry_angle);
            if (s < best) {
                best = s;
                next[i] = static_cast<int>(j);
            }
        }
    }
    std::vector<Loop> loops;
    std::vector<bool> visited(nc, false);
    for (size_t i0 = 0; i0 < nc; ++i0) {
        if (visited[i0]) continue;
        Loop L;
        size_t i = i0;
        while (!visited[i]) {
            visited[i] = true;
            for (const auto& p : chains[i].pieces) L.segments.push_back(p);
            size_t j = static_cast<size_t>(next[i]);
            L.arcs.emplace_back(chains[i].exit_angle,
                                ccw_span(chains[i].exit_angle, chains[j].entry_angle));
            i = j;
        }
        loops.push_back(std::move(L));
    }

    // Pick the loop bounding the component containing x. Components are
    // disjoint and simply connected, so the nearest boundary is the right one.
    Vec2 q = x;
    if (P.boundary_distance(x) <= 1e-9 * P.diameter()) {
        Vec2 in = inward_direction(P, x);
        double eps = 1e-7 * std::min(r, P.diameter());
        Vec2 cand = x + in * eps;
        for (int k = 0; k < 40 && !P.strictly_inside(cand); ++k) {
            eps *= 0.5;
            cand = x + in * eps;
        }
        q = cand;
    }
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < loops.size(); ++i) {
        double d = loop_distance(loops[i], q, x, r);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    out.component_id = static_cast<int>(best);
    out.segments = std::move(loops[best].segments);
    for (const auto& [from, span] : loops[best].arcs)
        out.arcs.emplace_back(from, from + span);
    return out;
}

StarCertificate star_certificate(const Polytope& P, const Vec2& x, double r, double tol) {
    if (tol < 0.0) tol = 1e-9 * P.diameter();
    ComponentBoundary cb = component_boundary(P, x, r);
    StarCertificate cert;
    cert.center = x;
    cert.radius = r;
    cert.component_pieces = cb.segments.size();
    cert.component_id = cb.component_id;
    cert.min_normal_value = std::numeric_limits<double>::infinity();
    if (cb.segments.empty()) {  // interior disk: no flat pieces, trivially star
        cert.star_shaped = true;
        cert.min_normal_value = 0.0;
        return cert;
    }
    Vec2 worst_pt;
    int worst_facet = -1;
    for (const auto& p : cb.segments) {
        Vec2 n = P.facet_normal(p.facet);
        // (y-x).n is linear on the piece: extrema at the endpoints.
        for (const Vec2& y : {p.a, p.b}) {
            double v = (y - x).dot(n);
            if (v < cert.min_normal_value) {
                cert.min_normal_value = v;
                worst_pt = y;
                worst_facet = p.facet;
            }
        }
    }
    cert.star_shaped = cert.min_normal_value >= -tol;
    if (!cert.star_shaped) cert.witness = ViolationWitness{worst_facet, worst_pt, cert.min_normal_value};
    return cert;
}

double MsrBounds::max_applicable() const {
    double v = generic_bound;
    if (stratum_bound) v = std::max(v, *stratum_bound);
    if (vertex_bound) v = std::max(v, *vertex_bound);
    return v;
}

MsrBounds msr_lower_bounds(const Polytope& P, const Vec2& x, double c_star) {
    if (P.dimension() != 2)
        throw Error(ErrorCode::ConfigError, "msr_lower_bounds: 2D polytopes only");
    if (!P.contains(x))
        throw Error(ErrorCode::PointOutsideDomain, "msr_lower_bounds: center outside polytope");
    MsrBounds b;
    b.generic_bound = P.skeleton_distance(x, 0);  // d(x, F^{n-2}) = vertex distance for n=2
    b.vertex_radius_r0 = P.vertex_radius_r0();
    double tol = 1e-9 * P.diameter();
    int v = P.vertex_near(x, tol);
    if (v >= 0) {
        b.vertex_bound = P.vertex_clearance(v);
    } else if (P.facet_containing(x, tol) >= 0) {
        b.stratum_bound = c_star * P.skeleton_distance(x, 0);
    }
    return b;
}

MsrResult max_star_radius(const Polytope& P, const Vec2& x, double tol,
                          std::optional<double> c_star) {
    if (tol < 0.0) tol = 1e-6 * P.diameter();
    double cs = 0.0;
    bool on_boundary = P.boundary_distance(x) <= 1e-9 * P.diameter() &&
                       P.vertex_near(x, 1e-9 * P.diameter()) < 0;
    if (on_boundary) cs = c_star ? *c_star : P.c_star();  // only needed on facet strata
    MsrBounds bounds = msr_lower_bounds(P, x, cs);

    MsrResult res;
    res.center = x;
    res.generic_bound = bounds.generic_bound;
    res.stratum_bound = bounds.stratum_bound;
    res.vertex_bound = bounds.vertex_bound;
    res.vertex_radius_r0 = bounds.vertex_radius_r0;

    double hi = P.diameter();
    if (star_certificate(P, x, hi).star_shaped) {
        res.r_lo = res.r_hi = res.value = hi;
        return res;
    }
    double lo = std::min(bounds.max_applicable(), hi);
    while (lo > tol && !star_certificate(P, x, lo).star_shaped) lo *= 0.5;
    if (lo <= tol && !star_certificate(P, x, lo).star_shaped) lo = 0.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (star_certificate(P, x, mid).star_shaped)
            lo = mid;
        else
            hi = mid;
    }
    res.r_lo = lo;
    res.r_hi = hi;
    res.value = lo;
    return res;
}

VerticalShiftResult vertical_shift_check(const Polytope& P, const Vec2& x,
                                         const ChartFrame& frame, double t, double tol) {
    if (tol < 0.0) tol = 1e-6 * P.diameter();
    VerticalShiftResult out;
    out.r_star_x = max_star_radius(P, x).value;
    out.r_double_star = std::min(out.r_star_x, frame.r0 / 4.0);
    if (t <= 0.0 || t > 0.5 * out.r_double_star + 1e-12 * P.diameter())
        throw Error(ErrorCode::ChartMiss, "vertical_shift_check: t must lie in (0, R**/2]");
    out.shifted = x + frame.up * t;
    out.r_star_shifted = max_star_radius(P, out.shifted).value;
    out.holds = out.r_star_shifted >= 0.5 * out.r_double_star - tol;
    return out;
}

StarCover boundary_cover(const Polytope& P, double r0, std::optional<double> c_star,
                         double shrink) {
    if (P.dimension() != 2)
        throw Error(ErrorCode::ConfigError, "boundary_cover: 2D polytopes only");
    if (r0 <= 0.0) throw Error(ErrorCode::NonPositiveRadius, "boundary_cover: r0 <= 0");
    double R0 = P.vertex_radius_r0();
    if (r0 > R0 + 1e-12 * P.diameter())
        throw Error(ErrorCode::RadiusTooLarge, "boundary_cover: r0 exceeds vertex clearance");

    StarCover cover;
    cover.r0 = r0;
    cover.c_star = c_star ? *c_star : P.c_star();
    cover.shrink = shrink;
    double cs = cover.c_star;
    double s = shrink;

    int idx = 0;
    // Level 0: a ball at every vertex, certified at cs*r0, covering the
    // rho1-neighborhood of the vertex set with radius 2*cs*s*r0.
    int m = static_cast<int>(P.facet_count());
    for (int v = 0; v < m; ++v) {
        CoverBall b;
        b.level = 0;
        b.index = idx++;
        b.center = P.vertex(v);
        b.certified_radius = cs * r0;
        b.covering_radius = 2.0 * cs * s * r0;
        b.certificate = star_certificate(P, b.center, b.certified_radius);
        if (!b.certificate.star_shaped)
            throw Error(ErrorCode::CertificateFailure, "boundary_cover: level-0 ball not star-shaped");
        cover.balls.push_back(std::move(b));
    }

    // Level 1: centers on the edges at vertex distance >= rho1, certified at
    // cs^2*s*r0, spaced so neighbors overlap within the covering radius.
    double rho1 = cs * s * r0;
    double cert1 = cs * cs * s * r0;
    double cov1 = 2.0 * cs * cs * s * s * r0;
    for (int f = 0; f < m; ++f) {
        Vec2 a = P.edge_a(f), b = P.edge_b(f);
        double L = (b - a).norm();
        Vec2 dir = (b - a) * (1.0 / L);
        auto far_enough = [&](double t) {
            return P.skeleton_distance(a + dir * t, 0) >= rho1;
        };
        // Maximal sub-intervals of {t : d(p(t), vertices) >= rho1} via a fine
        // scan with bisection refinement at the transitions.
        double step = std::min(cov1 * 0.5, L / 64.0);
        int ns = std::max(2, static_cast<int>(std::ceil(L / step)) + 1);
        std::vector<std::pair<double, double>> runs;
        std::optional<double> open;
        bool prev = far_enough(0.0);
        if (prev) open = 0.0;
        for (int i = 1; i < ns; ++i) {
            double t = L * i / (ns - 1);
            bool cur = far_enough(t);
            if (cur != prev) {
                double lo = L * (i - 1) / (ns - 1), hi = t;
                for (int k = 0; k < 60; ++k) {
                    double midt = 0.5 * (lo + hi);
                    (far_enough(midt) == cur ? hi : lo) = midt;
                }
                double edge_t = 0.5 * (lo + hi);
                if (cur)
                    open = edge_t;
                else {
                    runs.emplace_back(*open, edge_t);
                    open.reset();
                }
            }
            prev = cur;
        }
        if (open) runs.emplace_back(*open, L);

        for (auto [ta, tb] : runs) {
            double span = tb - ta;
            int k = std::max(1, static_cast<int>(std::ceil(span / (1.9 * cov1))));
            for (int i = 0; i <= k; ++i) {
                double t = ta + span * i / k;
                CoverBall cb;
                cb.level = 1;
                cb.index = idx++;
                cb.center = a + dir * t;
                cb.certified_radius = cert1;
                cb.covering_radius = cov1;
                cb.certificate = star_certificate(P, cb.center, cb.certified_radius);
                if (!cb.certificate.star_shaped)
                    throw Error(ErrorCode::CertificateFailure,
                                "boundary_cover: level-1 ball not star-shaped");
                cover.balls.push_back(std::move(cb));
            }
        }
    }
    return cover;
}

CoverReport cover_verify(const Polytope& P, const StarCover& cover, size_t samples,
                         bool strict) {
    CoverReport rep;
    rep.samples = samples;
    double slack = 1e-12 * P.diameter();
    for (size_t j = 0; j < samples; ++j) {
        double sarc = P.perimeter() * (static_cast<double>(j) + 0.5) / static_cast<double>(samples);
        Vec2 p = P.boundary_point_at(sarc);
        int mult = 0;
        for (const auto& b : cover.balls)
            if ((p - b.center).norm() <= b.covering_radius + slack) ++mult;
        rep.max_multiplicity = std::max(rep.max_multiplicity, mult);
        if (mult == 0) {
            ++rep.gaps;
            if (!rep.gap_witness) rep.gap_witness = p;
        }
    }
    for (const auto& b : cover.balls) {
        StarCertificate c = star_certificate(P, b.center, b.certified_radius);
        if (!c.star_shaped) ++rep.certificate_failures;
    }
    rep.ok = rep.gaps == 0 && rep.certificate_failures == 0;
    if (strict && rep.gaps > 0)
        throw Error(ErrorCode::CoverageGap, "cover_verify: uncovered boundary point");
    if (strict && rep.certificate_failures > 0)
        throw Error(ErrorCode::CertificateFailure, "cover_verify: ball certificate failed");
    return rep;
}

}  // namespace polynodal

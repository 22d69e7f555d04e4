#include "polynodal/nodal.hpp"

#include <algorithm>
#include <cmath>

#include "polynodal/quadrature.hpp"

namespace polynodal {

NodalSet extract_nodal_set(const DiscretePlanarField& f) {
    const Mesh& mesh = f.mesh();
    const Polytope& P = f.domain();
    const std::vector<double>& v = f.node_values();
    double boundary_tol = 1e-9 * P.diameter();
    double min_len = 1e-13 * P.diameter();

    NodalSet z;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
        const MeshTriangle& tr = mesh.triangles[t];
        double val[3];
        Vec2 pt[3];
        bool on_boundary = false;
        for (int e = 0; e < 3; ++e) {
            int n = tr.v[static_cast<size_t>(e)];
            val[e] = v[static_cast<size_t>(n)];
            pt[e] = mesh.nodes[static_cast<size_t>(n)];
            on_boundary = on_boundary || mesh.boundary_node[static_cast<size_t>(n)];
        }
        if (val[0] == 0.0 && val[1] == 0.0 && val[2] == 0.0) {
            z.degenerate_triangles.push_back(static_cast<int>(t));
            z.degenerate_area += mesh.triangle_area(static_cast<int>(t));
            continue;
        }
        // symbolic tie-breaking: exact zeros count as positive
        bool pos[3] = {val[0] >= 0.0, val[1] >= 0.0, val[2] >= 0.0};
        if (pos[0] == pos[1] && pos[1] == pos[2]) continue;

        Vec2 ends[2];
        int found = 0;
        for (int e = 0; e < 3 && found < 2; ++e) {
            int i = e, j = (e + 1) % 3;
            if (pos[i] == pos[j]) continue;
            double s = val[i] / (val[i] - val[j]);
            ends[found++] = pt[i] + (pt[j] - pt[i]) * s;
        }
        if (found != 2) continue;
        NodalSegment seg;
        seg.a = ends[0];
        seg.b = ends[1];
        seg.triangle = static_cast<int>(t);
        seg.boundary_adjacent = on_boundary;
        if (seg.length() < min_len) continue;
        // Dirichlet trace: drop pieces lying inside the polygon boundary
        if (P.boundary_distance(seg.a) <= boundary_tol &&
            P.boundary_distance(seg.b) <= boundary_tol)
            continue;
        z.total_length += seg.length();
        z.segments.push_back(seg);
    }
    return z;
}

double nodal_measure(const NodalSet& z) { return z.total_length; }

double nodal_measure(const NodalSet& z, const std::function<bool(const Vec2&)>& region) {
    double total = 0.0;
    for (const NodalSegment& s : z.segments)
        if (region(s.midpoint())) total += s.length();
    return total;
}

double nodal_measure_ball(const NodalSet& z, const Vec2& c, double r) {
    return nodal_measure(z, [&](const Vec2& p) { return (p - c).norm() <= r; });
}

double nodal_measure_boundary_strip(const NodalSet& z, const Polytope& P, double delta) {
    return nodal_measure(z, [&](const Vec2& p) { return P.boundary_distance(p) <= delta; });
}

double nodal_measure_ball3(const NodalSet& z, const Vec3& c, double r) {
    const GaussRule& rule = gauss_legendre(32);
    Vec2 cp = c.xy();
    double total = 0.0;
    for (const NodalSegment& s : z.segments) {
        SegmentDiskInterval iv = segment_disk_interval(s.a, s.b, cp, r);
        if (iv.empty) continue;
        double len = s.length();
        double mid = 0.5 * (iv.t0 + iv.t1), half = 0.5 * (iv.t1 - iv.t0);
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            double t = mid + half * rule.nodes[q];
            Vec2 p = s.a + (s.b - s.a) * t;
            double g = r * r - (p - cp).squaredNorm();
            if (g <= 0.0) continue;
            total += rule.weights[q] * half * len * 2.0 * std::sqrt(g);
        }
    }
    return total;
}

FlatBoundReport local_flat_bound_check(const Field& u, const NodalSet& z, const Vec3& x,
                                       double r, double rho_max) {
    if (!(r > 0.0))
        throw Error(ErrorCode::NonPositiveRadius, "local_flat_bound_check: r must be positive");
    const Polytope& P = u.base_domain();
    // F^{n-2} projects to the polygon vertices in both the planar and the
    // cylinder case
    if (P.skeleton_distance(x.xy(), 0) < 8.0 * r)
        throw Error(ErrorCode::FlatnessViolation,
                    "local_flat_bound_check: d(x, F^{n-2}) < 8r");
    int n = u.ambient_dim();
    FlatBoundReport rep;
    rep.length = (n == 2) ? nodal_measure_ball(z, x.xy(), r) : nodal_measure_ball3(z, x, r);
    rep.n_4r = doubling(u, x, 4.0 * r);
    rep.rho = rep.length / ((rep.n_4r + 1.0) * std::pow(r, n - 1));
    rep.rho_max = rho_max;
    rep.pass = rep.rho <= rho_max;
    return rep;
}

namespace {

// greedy covering count of the shell region by balls of the given radius
int cover_count(const Polytope& P, const Vec2& center, double ball_r, double region_r,
                double d_lo, double d_hi) {
    double pitch = 0.7 * ball_r;
    std::vector<Vec2> samples;
    int steps = static_cast<int>(std::ceil(2.0 * region_r / pitch));
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            Vec2 p{center.x - region_r + i * pitch, center.y - region_r + j * pitch};
            if ((p - center).norm() > region_r || !P.contains(p)) continue;
            double d = P.skeleton_distance(p, 0);
            if (d > d_lo && d <= d_hi) samples.push_back(p);
        }
    }
    int count = 0;
    std::vector<bool> covered(samples.size(), false);
    for (size_t i = 0; i < samples.size(); ++i) {
        if (covered[i]) continue;
        ++count;
        for (size_t j = i; j < samples.size(); ++j)
            if (!covered[j] && (samples[j] - samples[i]).norm() <= ball_r) covered[j] = true;
    }
    return count;
}

}  // namespace

ShellDecomposition shell_accounting(const Polytope& P, const DiscretePlanarField& f,
                                    const Vec2& center, double r0, std::optional<int> k_max,
                                    std::optional<double> c1) {
    if (!(r0 > 0.0))
        throw Error(ErrorCode::NonPositiveRadius, "shell_accounting: r0 must be positive");
    ShellDecomposition dec;
    dec.center = center;
    dec.r0 = r0;
    dec.certificate_ok = star_certificate(P, center, r0).star_shaped;
    if (!dec.certificate_ok)
        throw Error(ErrorCode::CertificateFailure,
                    "shell_accounting: B(center, r0) is not star-certified");
    double h = f.mesh().h;
    int km = k_max ? *k_max : std::max(1, static_cast<int>(std::floor(std::log2(r0 / (4.0 * h)))));
    dec.k_max = km;
    double cc = c1 ? *c1 : P.c_star();

    dec.nodal = extract_nodal_set(f);
    double ball_r = r0 / 8.0;

    dec.shells.resize(static_cast<size_t>(km));
    for (int k = 1; k <= km; ++k) {
        Shell& sh = dec.shells[static_cast<size_t>(k - 1)];
        sh.k = k;
        sh.d_lo = std::ldexp(r0, -k);
        sh.d_hi = std::ldexp(r0, -k + 1);
        sh.ball_radius = cc * std::ldexp(r0, -k - 5);
        sh.ball_count = cover_count(P, center, sh.ball_radius, ball_r, sh.d_lo, sh.d_hi);
    }

    for (NodalSegment& s : dec.nodal.segments) {
        Vec2 mid = s.midpoint();
        if ((mid - center).norm() > ball_r) continue;
        double len = s.length();
        dec.total_length += len;
        double d = P.skeleton_distance(mid, 0);
        if (d > r0) {
            dec.outside_length += len;
            continue;
        }
        int k = 0;
        for (int kk = 1; kk <= km; ++kk)
            if (d > std::ldexp(r0, -kk) && d <= std::ldexp(r0, -kk + 1)) {
                k = kk;
                break;
            }
        if (k == 0) {
            dec.unresolved_length += len;  // below 2^{-k_max} r0
            continue;
        }
        s.shell = k;
        dec.shells[static_cast<size_t>(k - 1)].nodal_length += len;
    }
    return dec;
}

YauSurvey yau_upper_survey(std::shared_ptr<const Polytope> P, std::shared_ptr<const Mesh> mesh,
                           const std::vector<EigenPair>& pairs) {
    if (pairs.empty()) throw Error(ErrorCode::ConfigError, "yau_upper_survey: no eigenpairs");
    double lambda_max = pairs.back().lambda;
    if (lambda_max * mesh->h * mesh->h > 0.5)
        throw Error(ErrorCode::ResolutionGuard,
                    "yau_upper_survey: lambda_max * h^2 > 0.5, refine the mesh");

    YauSurvey survey;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int npts = 0;
    for (const EigenPair& pair : pairs) {
        DiscretePlanarField field(P, mesh, pair.node_values);
        NodalSet z = extract_nodal_set(field);
        YauEntry e;
        e.index = pair.index;
        e.lambda = pair.lambda;
        e.cluster = pair.cluster;
        e.length = nodal_measure(z);
        e.ratio = e.length / std::sqrt(pair.lambda);
        survey.max_ratio = std::max(survey.max_ratio, e.ratio);
        if (e.ratio > 0.0) {
            double lx = std::log(e.lambda), ly = std::log(e.ratio);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++npts;
        }
        survey.entries.push_back(e);
    }
    if (npts >= 2) {
        double denom = npts * sxx - sx * sx;
        if (std::abs(denom) > 1e-30) survey.trend_slope = (npts * sxy - sx * sy) / denom;
    }
    return survey;
}

}  // namespace polynodal

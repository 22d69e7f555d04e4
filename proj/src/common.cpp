#include "polynodal/common.hpp"

#include <algorithm>

namespace polynodal {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonSimpleBoundary: return "NonSimpleBoundary";
        case ErrorCode::DegenerateFacet: return "DegenerateFacet";
        case ErrorCode::OpenBoundary: return "OpenBoundary";
        case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
        case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
        case ErrorCode::ChartMiss: return "ChartMiss";
        case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
        case ErrorCode::CoverageGap: return "CoverageGap";
        case ErrorCode::CertificateFailure: return "CertificateFailure";
        case ErrorCode::MeshFailure: return "MeshFailure";
        case ErrorCode::SolverDivergence: return "SolverDivergence";
        case ErrorCode::EmptyIntersection: return "EmptyIntersection";
        case ErrorCode::NoiseFloor: return "NoiseFloor";
        case ErrorCode::HypothesisFailure: return "HypothesisFailure";
        case ErrorCode::FlatnessViolation: return "FlatnessViolation";
        case ErrorCode::ResolutionGuard: return "ResolutionGuard";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.squaredNorm();
    if (len2 == 0.0) return a;
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    return (p - closest_point_on_segment(p, a, b)).norm();
}

namespace {
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    double v = (b - a).cross(c - a);
    double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                             std::abs(c.x), std::abs(c.y), 1.0});
    double eps = 1e-14 * scale * scale;
    if (v > eps) return 1;
    if (v < -eps) return -1;
    return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x, b.x) - 1e-14 <= p.x && p.x <= std::max(a.x, b.x) + 1e-14 &&
           std::min(a.y, b.y) - 1e-14 <= p.y && p.y <= std::max(a.y, b.y) + 1e-14;
}
}  // namespace

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    int o1 = orient(a, b, c);
    int o2 = orient(a, b, d);
    int o3 = orient(c, d, a);
    int o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

SegmentDiskInterval segment_disk_interval(const Vec2& a, const Vec2& b, const Vec2& c,
                                          double r) {
    SegmentDiskInterval out;
    Vec2 e = b - a;
    Vec2 w = a - c;
    double A = e.dot(e);
    double B = w.dot(e);
    double C = w.dot(w) - r * r;
    if (A <= 0.0) return out;
    double disc = B * B - A * C;
    if (disc <= 0.0) return out;
    double sq = std::sqrt(disc);
    double t0 = std::max((-B - sq) / A, 0.0);
    double t1 = std::min((-B + sq) / A, 1.0);
    if (t1 - t0 < 1e-13) return out;
    out.t0 = t0;
    out.t1 = t1;
    out.empty = false;
    return out;
}

}  // namespace polynodal

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polynodal {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squaredNorm() const { return x * x + y * y; }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    explicit Vec3(const Vec2& v, double z_ = 0.0) : x(v.x), y(v.y), z(z_) {}

    Vec2 xy() const { return {x, y}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

enum class ErrorCode {
    NonSimpleBoundary,
    DegenerateFacet,
    OpenBoundary,
    PointOutsideDomain,
    NonPositiveRadius,
    ChartMiss,
    RadiusTooLarge,
    CoverageGap,
    CertificateFailure,
    MeshFailure,
    SolverDivergence,
    EmptyIntersection,
    NoiseFloor,
    HypothesisFailure,
    FlatnessViolation,
    ResolutionGuard,
    ConfigError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Distance from p to segment [a,b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

// Closest point on segment [a,b] to p.
Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// True if segments [a,b] and [c,d] intersect (proper or touching).
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

// Parameter interval {t in [0,1] : |a + t(b-a) - c| <= r}, empty if the
// overlap is shorter than 1e-13 (segments meet a disk in one interval).
struct SegmentDiskInterval {
    double t0 = 0.0, t1 = 0.0;
    bool empty = true;
};
SegmentDiskInterval segment_disk_interval(const Vec2& a, const Vec2& b, const Vec2& c, double r);

}  // namespace polynodal

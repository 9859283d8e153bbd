#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace tofcover {

constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// 3D vector in meters (or unitless for directions). Constructors reject
/// non-finite components.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
            throw std::invalid_argument("Vec3: non-finite component");
    }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    Vec3 normalized() const {
        const double n = norm();
        if (n <= 0.0) throw std::invalid_argument("Vec3: cannot normalize zero vector");
        return *this / n;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Deterministic unit vector perpendicular to a unit direction d:
/// normalize(d x z), falling back to normalize(d x x) when d is parallel to z.
Vec3 any_perpendicular(const Vec3& d);

/// Row-major 3x3 matrix. Only what rigid transforms need.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return {}; }

    double operator()(int r, int c) const { return m[3 * r + c]; }
    double& operator()(int r, int c) { return m[3 * r + c]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
    double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    /// Rodrigues rotation about a unit axis.
    static Mat3 axis_angle(const Vec3& axis, double angle);
    /// Intrinsic Z-Y-X (yaw-pitch-roll applied as Rz*Ry*Rx).
    static Mat3 from_rpy(double roll, double pitch, double yaw);
};

/// Rigid transform: p -> R*p + t. Rotation is validated orthonormal with
/// determinant +1 within 1e-9.
class RigidTransform {
  public:
    RigidTransform() = default;
    RigidTransform(const Mat3& rotation, const Vec3& translation);

    static RigidTransform identity() { return {}; }
    static RigidTransform translate(const Vec3& t) { return {Mat3::identity(), t}; }
    static RigidTransform rotate(const Vec3& axis, double angle) {
        return {Mat3::axis_angle(axis, angle), Vec3{}};
    }

    Vec3 apply(const Vec3& p) const { return rot_ * p + trans_; }
    Vec3 apply_direction(const Vec3& d) const { return rot_ * d; }

    RigidTransform compose(const RigidTransform& o) const {
        return {rot_ * o.rot_, rot_ * o.trans_ + trans_};
    }
    RigidTransform inverse() const {
        Mat3 rt = rot_.transposed();
        return {rt, -(rt * trans_)};
    }

    const Mat3& rotation() const { return rot_; }
    const Vec3& translation() const { return trans_; }

  private:
    Mat3 rot_;
    Vec3 trans_;
};

/// Axis-aligned box; empty() when any min exceeds the matching max.
struct Aabb {
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};

    static Aabb empty_box() {
        Aabb b;
        b.lo = Vec3(1, 1, 1);
        b.hi = Vec3(-1, -1, -1);
        return b;
    }
    bool empty() const { return lo.x > hi.x || lo.y > hi.y || lo.z > hi.z; }

    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
    bool contains(const Aabb& o) const {
        return !o.empty() && contains(o.lo) && contains(o.hi);
    }
    bool intersects(const Aabb& o) const {
        if (empty() || o.empty()) return false;
        return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
               lo.z <= o.hi.z && hi.z >= o.lo.z;
    }
    void expand(const Vec3& p) {
        if (empty()) {
            lo = hi = p;
            return;
        }
        lo = Vec3(std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z));
        hi = Vec3(std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z));
    }
    void expand(const Aabb& o) {
        if (o.empty()) return;
        expand(o.lo);
        expand(o.hi);
    }
    Aabb inflated(double r) const {
        Aabb b = *this;
        if (b.empty()) return b;
        b.lo = b.lo - Vec3(r, r, r);
        b.hi = b.hi + Vec3(r, r, r);
        return b;
    }
};

}  // namespace tofcover

#include "tofcover/geom.hpp"

namespace tofcover {

namespace {
constexpr double kOrthoTol = 1e-9;
}

Vec3 any_perpendicular(const Vec3& d) {
    Vec3 c = d.cross(Vec3(0, 0, 1));
    if (c.norm2() < 1e-12) c = d.cross(Vec3(1, 0, 0));
    return c.normalized();
}

Mat3 Mat3::axis_angle(const Vec3& axis, double angle) {
    const Vec3 a = axis.normalized();
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 r;
    r(0, 0) = t * a.x * a.x + c;
    r(0, 1) = t * a.x * a.y - s * a.z;
    r(0, 2) = t * a.x * a.z + s * a.y;
    r(1, 0) = t * a.x * a.y + s * a.z;
    r(1, 1) = t * a.y * a.y + c;
    r(1, 2) = t * a.y * a.z - s * a.x;
    r(2, 0) = t * a.x * a.z - s * a.y;
    r(2, 1) = t * a.y * a.z + s * a.x;
    r(2, 2) = t * a.z * a.z + c;
    return r;
}

Mat3 Mat3::from_rpy(double roll, double pitch, double yaw) {
    return Mat3::axis_angle(Vec3(0, 0, 1), yaw) * Mat3::axis_angle(Vec3(0, 1, 0), pitch) *
           Mat3::axis_angle(Vec3(1, 0, 0), roll);
}

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rot_(rotation), trans_(translation) {
    // R^T R = I and det = +1, both within 1e-9.
    const Mat3 should_be_id = rot_.transposed() * rot_;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(should_be_id(i, j) - want) > kOrthoTol)
                throw std::invalid_argument("RigidTransform: rotation not orthonormal");
        }
    if (std::abs(rot_.determinant() - 1.0) > kOrthoTol)
        throw std::invalid_argument("RigidTransform: rotation determinant != +1");
}

}  // namespace tofcover

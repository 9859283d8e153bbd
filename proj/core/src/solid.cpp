#include "tofcover/solid.hpp"

namespace tofcover {

Cone::Cone(const Vec3& apex, const Vec3& axis, double half_angle, double height)
    : apex_(apex), axis_(axis.normalized()), half_angle_(half_angle), height_(height),
      tan_half_(std::tan(half_angle)) {
    if (!(half_angle > 0.0 && half_angle < kPi / 2.0))
        throw std::invalid_argument("Cone: half_angle outside (0, pi/2)");
    if (!(height > 0.0)) throw std::invalid_argument("Cone: height must be positive");
}

bool Cone::contains(const Vec3& p) const {
    const Vec3 v = p - apex_;
    const double axial = v.dot(axis_);
    if (axial < 0.0 || axial > height_) return false;
    const double radial2 = v.norm2() - axial * axial;
    const double limit = axial * tan_half_;
    return radial2 <= limit * limit;
}

Aabb Cone::bounding_box() const {
    const double r = base_radius();
    const Vec3 base = apex_ + axis_ * height_;
    // Base-disc extent along each world axis.
    const Vec3 e(r * std::sqrt(std::max(0.0, 1.0 - axis_.x * axis_.x)),
                 r * std::sqrt(std::max(0.0, 1.0 - axis_.y * axis_.y)),
                 r * std::sqrt(std::max(0.0, 1.0 - axis_.z * axis_.z)));
    Aabb box = Aabb::empty_box();
    box.expand(apex_);
    box.expand(base - e);
    box.expand(base + e);
    return box;
}

Sphere::Sphere(const Vec3& center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Sphere: radius must be positive");
}

bool Sphere::contains(const Vec3& p) const {
    return (p - center_).norm2() <= radius_ * radius_;
}

Aabb Sphere::bounding_box() const {
    Aabb box;
    box.lo = center_ - Vec3(radius_, radius_, radius_);
    box.hi = center_ + Vec3(radius_, radius_, radius_);
    return box;
}

TubeShell::TubeShell(std::shared_ptr<const PiecewiseBezierCurve> curve, double r_inner,
                     double r_outer)
    : curve_(std::move(curve)), r_inner_(r_inner), r_outer_(r_outer) {
    if (!curve_) throw std::invalid_argument("TubeShell: null curve");
    if (!(r_inner >= 0.0 && r_inner < r_outer))
        throw std::invalid_argument("TubeShell: need 0 <= r_inner < r_outer");
}

bool TubeShell::contains(const Vec3& p) const {
    const auto cp = curve_->closest(p);
    return cp.in_domain && cp.distance >= r_inner_ && cp.distance <= r_outer_;
}

Aabb TubeShell::bounding_box() const { return curve_->bounding_box().inflated(r_outer_); }

UnionSolid::UnionSolid(std::vector<SolidPtr> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("UnionSolid: empty member list");
    for (const auto& m : members_)
        if (!m) throw std::invalid_argument("UnionSolid: null member");
}

bool UnionSolid::contains(const Vec3& p) const {
    for (const auto& m : members_)
        if (m->contains(p)) return true;
    return false;
}

Aabb UnionSolid::bounding_box() const {
    Aabb box = Aabb::empty_box();
    for (const auto& m : members_) box.expand(m->bounding_box());
    return box;
}

void UnionSolid::collect_leaves(std::vector<const Solid*>& out) const {
    for (const auto& m : members_) m->collect_leaves(out);
}

}  // namespace tofcover

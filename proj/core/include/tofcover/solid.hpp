#pragma once

#include <memory>
#include <vector>

#include "tofcover/bezier.hpp"
#include "tofcover/geom.hpp"

namespace tofcover {

/// Implicit solid defined by point membership. Boundary membership is
/// inclusive. contains(p) == true implies p lies inside bounding_box().
class Solid {
  public:
    virtual ~Solid() = default;
    virtual bool contains(const Vec3& p) const = 0;
    virtual Aabb bounding_box() const = 0;
    /// True for shapes where "all cube corners inside" implies the whole
    /// cube is inside (used as an exact voxelization shortcut).
    virtual bool is_convex() const { return false; }
    /// Appends the non-union leaves of this solid (itself, unless a union).
    virtual void collect_leaves(std::vector<const Solid*>& out) const { out.push_back(this); }
};

using SolidPtr = std::shared_ptr<const Solid>;

/// Right circular cone from an apex opening along a unit axis.
class Cone : public Solid {
  public:
    Cone(const Vec3& apex, const Vec3& axis, double half_angle, double height);

    bool contains(const Vec3& p) const override;
    Aabb bounding_box() const override;
    bool is_convex() const override { return true; }

    const Vec3& apex() const { return apex_; }
    const Vec3& axis() const { return axis_; }
    double half_angle() const { return half_angle_; }
    double height() const { return height_; }
    double base_radius() const { return height_ * tan_half_; }

  private:
    Vec3 apex_;
    Vec3 axis_;
    double half_angle_;
    double height_;
    double tan_half_;
};

class Sphere : public Solid {
  public:
    Sphere(const Vec3& center, double radius);

    bool contains(const Vec3& p) const override;
    Aabb bounding_box() const override;
    bool is_convex() const override { return true; }

    const Vec3& center() const { return center_; }
    double radius() const { return radius_; }

  private:
    Vec3 center_;
    double radius_;
};

/// Shell of revolution around a pose curve: points whose distance to the
/// curve lies in [r_inner, r_outer], with flat ends (no spherical caps --
/// a point projecting beyond either curve end is outside).
class TubeShell : public Solid {
  public:
    TubeShell(std::shared_ptr<const PiecewiseBezierCurve> curve, double r_inner, double r_outer);

    bool contains(const Vec3& p) const override;
    Aabb bounding_box() const override;

    const PiecewiseBezierCurve& curve() const { return *curve_; }
    std::shared_ptr<const PiecewiseBezierCurve> curve_ptr() const { return curve_; }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }

  private:
    std::shared_ptr<const PiecewiseBezierCurve> curve_;
    double r_inner_;
    double r_outer_;
};

/// Set union of member solids.
class UnionSolid : public Solid {
  public:
    explicit UnionSolid(std::vector<SolidPtr> members);

    bool contains(const Vec3& p) const override;
    Aabb bounding_box() const override;
    void collect_leaves(std::vector<const Solid*>& out) const override;

    const std::vector<SolidPtr>& members() const { return members_; }

  private:
    std::vector<SolidPtr> members_;
};

inline SolidPtr make_cone(const Vec3& apex, const Vec3& axis, double half_angle, double height) {
    return std::make_shared<Cone>(apex, axis, half_angle, height);
}
inline SolidPtr make_sphere(const Vec3& center, double radius) {
    return std::make_shared<Sphere>(center, radius);
}
inline SolidPtr make_tube_shell(std::shared_ptr<const PiecewiseBezierCurve> curve, double r_inner,
                                double r_outer) {
    return std::make_shared<TubeShell>(std::move(curve), r_inner, r_outer);
}
inline SolidPtr make_union(std::vector<SolidPtr> members) {
    return std::make_shared<UnionSolid>(std::move(members));
}

}  // namespace tofcover

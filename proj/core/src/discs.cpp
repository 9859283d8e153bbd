#include "tofcover/discs.hpp"
#include <limits>

#include <stdexcept>

namespace tofcover {

namespace {

int station_count(double length, double spacing) {
    return static_cast<int>(std::floor(length / spacing + 1e-9)) + 1;
}

}  // namespace

std::vector<Disc> disc_decimate(const Solid& solid, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("disc_decimate: spacing must be positive");
    std::vector<Disc> discs;

    if (const auto* cone = dynamic_cast<const Cone*>(&solid)) {
        const int n = station_count(cone->height(), spacing);
        const double tan_half = std::tan(cone->half_angle());
        for (int k = 0; k < n; ++k) {
            const double s = k * spacing;
            discs.push_back({cone->apex() + cone->axis() * s, cone->axis(), s * tan_half, 0.0});
        }
        return discs;
    }
    if (const auto* sphere = dynamic_cast<const Sphere*>(&solid)) {
        const double r = sphere->radius();
        const Vec3 axis(0, 0, 1);
        const int n = station_count(2.0 * r, spacing);
        for (int k = 0; k < n; ++k) {
            const double z = -r + k * spacing;
            const double radius = std::sqrt(std::max(0.0, r * r - z * z));
            discs.push_back({sphere->center() + axis * z, axis, radius, 0.0});
        }
        return discs;
    }
    if (const auto* tube = dynamic_cast<const TubeShell*>(&solid)) {
        const PiecewiseBezierCurve& curve = tube->curve();
        const double length = curve.arclength();
        const int n = station_count(length, spacing);
        for (int k = 0; k < n; ++k) {
            const double t = std::min(1.0, (k * spacing) / length);
            const auto frame = curve.frenet_frame(t);
            discs.push_back({curve.eval(t), frame.tangent, tube->r_outer(), tube->r_inner()});
        }
        return discs;
    }
    throw std::invalid_argument("disc_decimate: solid kind has no sweep axis");
}

namespace {

class DiscStackSolid : public Solid {
  public:
    // Membership is a union of slabs; the hairline inflation keeps points on
    // a shared slab boundary from falling between two discs to rounding.
    static constexpr double kSlabTol = 1e-9;

    DiscStackSolid(std::vector<Disc> discs, double thickness)
        : discs_(std::move(discs)) {
        if (discs_.empty()) throw std::invalid_argument("disc stack: no discs");
        if (!(thickness > 0.0)) throw std::invalid_argument("disc stack: thickness must be positive");
        // Each slab reaches halfway to its neighbor discs so the stack tiles
        // the decimated extent exactly; the end slabs stay flush with the
        // end discs. A lone disc falls back to the given thickness.
        lo_.resize(discs_.size());
        hi_.resize(discs_.size());
        for (size_t i = 0; i < discs_.size(); ++i) {
            lo_[i] = (i == 0) ? 0.0 : -0.5 * distance(discs_[i].center, discs_[i - 1].center);
            hi_[i] = (i + 1 == discs_.size())
                         ? 0.0
                         : 0.5 * distance(discs_[i].center, discs_[i + 1].center);
            if (discs_.size() == 1) {
                lo_[i] = -thickness * 0.5;
                hi_[i] = thickness * 0.5;
            }
            const Disc& d = discs_[i];
            Aabb slab = Aabb::empty_box();
            const Vec3 e(d.radius * std::sqrt(std::max(0.0, 1.0 - d.normal.x * d.normal.x)),
                         d.radius * std::sqrt(std::max(0.0, 1.0 - d.normal.y * d.normal.y)),
                         d.radius * std::sqrt(std::max(0.0, 1.0 - d.normal.z * d.normal.z)));
            slab.expand(d.center + d.normal * lo_[i] - e);
            slab.expand(d.center + d.normal * lo_[i] + e);
            slab.expand(d.center + d.normal * hi_[i] - e);
            slab.expand(d.center + d.normal * hi_[i] + e);
            bbox_.expand(slab.inflated(kSlabTol));
        }
    }

    bool contains(const Vec3& p) const override {
        // Nearest-cross-section semantics: the point is judged against the
        // disc whose plane it is closest to. Unlike a union of slabs this
        // cannot double-count or drop points whose slab assignment is a
        // rounding tie (slab boundaries often coincide with voxel centers,
        // both being derived from the voxel size).
        size_t best = discs_.size();
        double best_abs = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < discs_.size(); ++i) {
            const double axial = (p - discs_[i].center).dot(discs_[i].normal);
            if (axial < lo_[i] - kSlabTol || axial > hi_[i] + kSlabTol) continue;
            const double a = std::abs(axial);
            if (a < best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (best == discs_.size()) return false;
        const Disc& d = discs_[best];
        const Vec3 v = p - d.center;
        const double axial = v.dot(d.normal);
        const double radial2 = v.norm2() - axial * axial;
        return radial2 <= d.radius * d.radius && radial2 >= d.inner_radius * d.inner_radius;
    }

    Aabb bounding_box() const override { return bbox_; }

  private:
    std::vector<Disc> discs_;
    std::vector<double> lo_, hi_;
    Aabb bbox_ = Aabb::empty_box();
};

}  // namespace

SolidPtr make_disc_stack(std::vector<Disc> discs, double thickness) {
    return std::make_shared<DiscStackSolid>(std::move(discs), thickness);
}

}  // namespace tofcover

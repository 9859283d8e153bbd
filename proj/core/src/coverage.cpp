#include "tofcover/coverage.hpp"

#include <stdexcept>

namespace tofcover {

std::string MaxVolumeKind::name() const {
    switch (type) {
        case Type::OperatingWorkspace: return "operating";
        case Type::ToolSphere: return "tool";
        case Type::OperatingPlusTool: return "operating_tool";
        case Type::Shell: return "shell";
    }
    return "unknown";
}

double MaxVolumeKind::r_param() const {
    return type == Type::OperatingPlusTool ? 0.0 : radius;
}

SolidPtr make_vmax(const MaxVolumeKind& kind, const PoseSnapshot& pose, const RobotModel& model,
                   std::shared_ptr<const PiecewiseBezierCurve> curve,
                   const CoverageVolumeOptions& options) {
    const Vec3 base = pose.link_endpoints.front();
    switch (kind.type) {
        case MaxVolumeKind::Type::OperatingWorkspace:
            return make_sphere(base + options.operating_center_offset, kind.radius);
        case MaxVolumeKind::Type::ToolSphere:
            return make_sphere(pose.tcp_frame.translation(), kind.radius);
        case MaxVolumeKind::Type::OperatingPlusTool:
            return make_union({make_sphere(base + options.operating_center_offset, kind.radius),
                               make_sphere(pose.tcp_frame.translation(), kind.tool_radius)});
        case MaxVolumeKind::Type::Shell:
            if (!(kind.radius > model.self_occupancy_radius()))
                throw std::invalid_argument(
                    "make_vmax: shell radius must exceed the self-occupancy radius");
            return make_tube_shell(std::move(curve), model.self_occupancy_radius(), kind.radius);
    }
    throw std::logic_error("make_vmax: unhandled kind");
}

SolidPtr make_self_volume(const RobotModel& model,
                          std::shared_ptr<const PiecewiseBezierCurve> curve) {
    return make_tube_shell(std::move(curve), 0.0, model.self_occupancy_radius());
}

PappusResult pappus_shell_volume(const PiecewiseBezierCurve& curve, double r_inner,
                                 double r_outer) {
    if (!(r_inner >= 0.0 && r_inner <= r_outer))
        throw std::invalid_argument("pappus_shell_volume: need 0 <= r_inner <= r_outer");
    PappusResult out;
    out.volume = kPi * (r_outer * r_outer - r_inner * r_inner) * curve.arclength();
    out.curvature_warning = curve.min_curvature_radius() < r_outer;
    return out;
}

CoverageResult coverage(const Octree& vmax, const Octree& vfov, const Octree& vr,
                        bool vr_already_excluded) {
    if (!(vmax.domain() == vfov.domain()) || !(vmax.domain() == vr.domain()))
        throw std::invalid_argument("coverage: octree domain mismatch");

    const Octree reference = vr_already_excluded ? vmax : subtract(vmax, vr);
    const std::uint64_t ref_count = reference.occupied_count();
    if (ref_count == 0)
        throw std::invalid_argument("coverage: empty reference volume (zeta undefined)");

    const std::uint64_t covered = intersect(reference, vfov).occupied_count();
    const Octree leftover = subtract(reference, vfov);
    const std::uint64_t left_count = leftover.occupied_count();

    // Intersection form and subtraction-only form of zeta. Counts are exact
    // integers well below 2^53, so the two doubles must be bit-identical.
    const double zeta_intersection =
        100.0 * static_cast<double>(covered) / static_cast<double>(ref_count);
    const double zeta_subtraction =
        100.0 * (static_cast<double>(ref_count) - static_cast<double>(left_count)) /
        static_cast<double>(ref_count);
    if (zeta_intersection != zeta_subtraction)
        throw std::logic_error("coverage: intersection and subtraction forms disagree");

    const double l = vmax.domain().voxel_size();
    const double voxel_volume = l * l * l;

    CoverageResult result;
    result.zeta_percent = zeta_intersection;
    result.lambda_vmax = static_cast<double>(ref_count) * voxel_volume;
    result.lambda_leftover = static_cast<double>(left_count) * voxel_volume;
    result.voxel_size = l;
    result.max_depth = vmax.domain().max_depth;
    return result;
}

}  // namespace tofcover

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tofcover/bezier.hpp"
#include "tofcover/octree.hpp"
#include "tofcover/robot.hpp"
#include "tofcover/solid.hpp"

namespace tofcover {

/// Reference "ideal" volume the sensors should cover.
struct MaxVolumeKind {
    enum class Type { OperatingWorkspace, ToolSphere, OperatingPlusTool, Shell };
    Type type = Type::OperatingWorkspace;
    double radius = 1.3;       // sphere radius or shell outer radius
    double tool_radius = 1.5;  // second sphere for OperatingPlusTool

    static MaxVolumeKind operating(double r = 1.3) {
        return {Type::OperatingWorkspace, r, 0.0};
    }
    static MaxVolumeKind tool(double r = 1.5) { return {Type::ToolSphere, r, 0.0}; }
    static MaxVolumeKind operating_plus_tool(double r_operating = 1.3, double r_tool = 1.5) {
        return {Type::OperatingPlusTool, r_operating, r_tool};
    }
    static MaxVolumeKind shell(double r_shell) { return {Type::Shell, r_shell, 0.0}; }

    /// CSV/key name: operating | tool | operating_tool | shell.
    std::string name() const;
    /// The defining radius echoed in result rows (0 for the combined kind).
    double r_param() const;
};

struct CoverageVolumeOptions {
    /// Center of the operating-workspace sphere relative to the robot base
    /// (default: shoulder height of the bundled arm).
    Vec3 operating_center_offset{0, 0, 0.1273};
};

/// Builds the reference solid for one kind. Shell kinds ride on the pose
/// curve with the robot's self-occupancy radius as the inner bore. The
/// robot self volume V_R is not subtracted here; coverage() does that on
/// the voxel side.
SolidPtr make_vmax(const MaxVolumeKind& kind, const PoseSnapshot& pose, const RobotModel& model,
                   std::shared_ptr<const PiecewiseBezierCurve> curve,
                   const CoverageVolumeOptions& options = {});

/// Robot self volume V_R: solid tube of the self-occupancy radius around
/// the pose curve.
SolidPtr make_self_volume(const RobotModel& model,
                          std::shared_ptr<const PiecewiseBezierCurve> curve);

/// Shell volume by the Pappus centroid theorem:
/// pi * (r_outer^2 - r_inner^2) * arclength. Overestimates self-overlapping
/// tubes, so a curvature radius below r_outer raises the warning flag
/// instead of failing.
struct PappusResult {
    double volume = 0.0;
    bool curvature_warning = false;
};
PappusResult pappus_shell_volume(const PiecewiseBezierCurve& curve, double r_inner,
                                 double r_outer);

/// Coverage of one (config, V_max) pair.
struct CoverageResult {
    std::string config_label;
    std::string vmax_name;
    double r_param = 0.0;
    int theta_deg = 0;
    double zeta_percent = 0.0;
    double lambda_vmax = 0.0;      // m^3, after V_R exclusion
    double lambda_leftover = 0.0;  // m^3 of V_max not covered
    double voxel_size = 0.0;
    int max_depth = 0;
    double pose_phase = 0.5;
    std::vector<std::string> warnings;
};

/// Coverage ratio zeta from octrees sharing one domain. Computed through
/// both the intersection form and the subtraction-only form; the two must
/// agree bit-exactly or this throws. vmax must still include V_R unless
/// vr_already_excluded is set. An empty reference volume is an error.
CoverageResult coverage(const Octree& vmax, const Octree& vfov, const Octree& vr,
                        bool vr_already_excluded = false);

}  // namespace tofcover

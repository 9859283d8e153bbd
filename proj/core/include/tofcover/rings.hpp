#pragma once

#include <string>
#include <vector>

#include "tofcover/robot.hpp"
#include "tofcover/solid.hpp"

namespace tofcover {

/// Single-unit solid-state lidar: detection cone of the given range and
/// full opening angle.
struct SensorSpec {
    double range = 1.5;                        // meters
    double fov_full_angle = deg_to_rad(25.0);  // radians
};

/// One ring of sensors around a link.
struct RingPlacement {
    int link_index = 0;
    double axial_position = 0.5;  // fraction along the link, proximal -> distal
    double tilt_theta = 0.0;      // radians from the radial direction toward the link axis
    int tilt_sign = 0;            // +1 tilts toward the distal end, -1 proximal, 0 radial
    int sensor_count = 8;
    double ring_radius = 0.06;    // standoff from the link centerline
    double azimuth_phase = 0.0;   // radians; rotates the whole ring about the link
};

/// A full `n{i}_{j}_{theta}` configuration expanded to concrete rings.
struct SensorConfig {
    std::vector<RingPlacement> rings;
    SensorSpec spec;
    std::string label;
};

/// Where the labeled rings go on a particular robot. Defaults match the
/// bundled UR10-like model (shoulder = upper arm link, elbow = forearm link,
/// tool ring on the flange link at the TCP).
struct RingLayoutOptions {
    int shoulder_link = 2;
    int elbow_link = 3;
    double center_axial = 0.5;
    double dual_axial_proximal = 0.1;
    double dual_axial_distal = 0.9;
    /// Dual rings tilt toward each other: the proximal ring toward the
    /// distal end and vice versa, so around theta = 10 deg their fans merge
    /// mid-link and behave like a single center ring.
    int dual_tilt_sign_proximal = +1;
    int dual_tilt_sign_distal = -1;
    /// Rotate the distal ring half a sensor step so the paired fans
    /// interleave instead of shadowing each other where they cross.
    bool dual_azimuth_interleave = true;
    double ring_radius = 0.06;
    int tool_link = -1;  // -1 selects the last link
    double tool_axial = 1.0;
    int tool_sensor_count = 8;
    int theta_min_deg = 0;
    int theta_max_deg = 60;
};

/// Parses `n<i>_<j>_<theta>`: i rings per shoulder/elbow link (1, 2, or 3),
/// j sensors per ring, theta the tilt in whole degrees. A tool ring is
/// always appended. i = 1 requires theta = 0 (the center ring is radial);
/// i = 3 combines the dual tilted rings with an untilted center ring.
SensorConfig parse_config_label(const std::string& label, const SensorSpec& spec = {},
                                const RingLayoutOptions& layout = {});

std::string format_config_label(int rings_per_link, int sensors_per_ring, int theta_deg);

/// A sensor posed on the robot: frame z-axis is the cone axis.
struct PlacedSensor {
    RigidTransform pose;
    SolidPtr cone;
};

/// Distributes each ring's sensors at equal angular spacing around its link,
/// radially outward then tilted by tilt_theta toward the ring's designated
/// link direction. Placement is derived in the link frame, so a rigid base
/// transform moves all sensors by exactly that transform.
std::vector<PlacedSensor> place_sensors(const SensorConfig& config, const PoseSnapshot& pose);

/// Set union of all sensor FOV cones (V_FOV).
SolidPtr fov_union(const std::vector<PlacedSensor>& sensors);

}  // namespace tofcover

#include "tofcover/rings.hpp"

#include <regex>
#include <stdexcept>

namespace tofcover {

std::string format_config_label(int rings_per_link, int sensors_per_ring, int theta_deg) {
    return "n" + std::to_string(rings_per_link) + "_" + std::to_string(sensors_per_ring) + "_" +
           std::to_string(theta_deg);
}

SensorConfig parse_config_label(const std::string& label, const SensorSpec& spec,
                                const RingLayoutOptions& layout) {
    static const std::regex pattern(R"(^n([0-9]+)_([0-9]+)_([0-9]+)$)");
    std::smatch m;
    if (!std::regex_match(label, m, pattern))
        throw std::invalid_argument("config label: expected n<i>_<j>_<theta>, got '" + label + "'");
    const int i = std::stoi(m[1]);
    const int j = std::stoi(m[2]);
    const int theta_deg = std::stoi(m[3]);

    if (i < 1 || i > 3)
        throw std::invalid_argument("config label: rings per link must be 1, 2, or 3");
    if (j < 1) throw std::invalid_argument("config label: sensors per ring must be >= 1");
    if (theta_deg < layout.theta_min_deg || theta_deg > layout.theta_max_deg)
        throw std::invalid_argument("config label: theta outside [" +
                                    std::to_string(layout.theta_min_deg) + ", " +
                                    std::to_string(layout.theta_max_deg) + "] deg");
    if (i == 1 && theta_deg != 0)
        throw std::invalid_argument("config label: single center rings are radial (theta must be 0)");

    const double theta = deg_to_rad(theta_deg);
    SensorConfig config;
    config.spec = spec;
    config.label = format_config_label(i, j, theta_deg);

    for (int link : {layout.shoulder_link, layout.elbow_link}) {
        if (i == 1 || i == 3)
            config.rings.push_back(
                {link, layout.center_axial, 0.0, 0, j, layout.ring_radius, 0.0});
        if (i == 2 || i == 3) {
            const double interleave =
                layout.dual_azimuth_interleave ? kPi / static_cast<double>(j) : 0.0;
            config.rings.push_back({link, layout.dual_axial_proximal, theta,
                                    layout.dual_tilt_sign_proximal, j, layout.ring_radius, 0.0});
            config.rings.push_back({link, layout.dual_axial_distal, theta,
                                    layout.dual_tilt_sign_distal, j, layout.ring_radius,
                                    interleave});
        }
    }
    config.rings.push_back({layout.tool_link, layout.tool_axial, 0.0, 0,
                            layout.tool_sensor_count, layout.ring_radius, 0.0});
    return config;
}

std::vector<PlacedSensor> place_sensors(const SensorConfig& config, const PoseSnapshot& pose) {
    std::vector<PlacedSensor> sensors;
    const int link_count = static_cast<int>(pose.link_endpoints.size()) - 1;

    for (const RingPlacement& ring : config.rings) {
        int link = ring.link_index;
        if (link < 0) link += link_count;  // -1 addresses the last link
        if (link < 0 || link >= link_count)
            throw std::out_of_range("place_sensors: ring link index out of range");
        if (ring.sensor_count < 1)
            throw std::invalid_argument("place_sensors: ring needs at least one sensor");
        if (!(ring.tilt_theta >= 0.0 && ring.tilt_theta < kPi / 2.0))
            throw std::invalid_argument("place_sensors: tilt outside [0, pi/2)");

        // Work in the link frame so placement is pose-equivariant.
        const RigidTransform& frame = pose.link_frames[static_cast<size_t>(link)];
        const RigidTransform inv = frame.inverse();
        const Vec3 a = inv.apply(pose.link_endpoints[static_cast<size_t>(link)]);
        const Vec3 b = inv.apply(pose.link_endpoints[static_cast<size_t>(link) + 1]);
        const Vec3 dir = (b - a).normalized();
        const Vec3 u = any_perpendicular(dir);
        const Vec3 v = dir.cross(u);

        const Vec3 ring_center = a + (b - a) * ring.axial_position;
        const double tilt = ring.tilt_theta * ring.tilt_sign;

        for (int s = 0; s < ring.sensor_count; ++s) {
            const double phi = ring.azimuth_phase + 2.0 * kPi * s / ring.sensor_count;
            const Vec3 radial = u * std::cos(phi) + v * std::sin(phi);
            const Vec3 axis_local = radial * std::cos(tilt) + dir * std::sin(tilt);
            const Vec3 pos_local = ring_center + radial * ring.ring_radius;

            // Sensor frame: z along the cone axis.
            const Vec3 zs = axis_local;
            const Vec3 xs = any_perpendicular(zs);
            const Vec3 ys = zs.cross(xs);
            Mat3 rot;
            rot(0, 0) = xs.x; rot(0, 1) = ys.x; rot(0, 2) = zs.x;
            rot(1, 0) = xs.y; rot(1, 1) = ys.y; rot(1, 2) = zs.y;
            rot(2, 0) = xs.z; rot(2, 1) = ys.z; rot(2, 2) = zs.z;

            const RigidTransform sensor_pose =
                frame.compose(RigidTransform(rot, pos_local));
            const Vec3 apex = sensor_pose.translation();
            const Vec3 axis_world = sensor_pose.apply_direction(Vec3(0, 0, 1));
            sensors.push_back({sensor_pose,
                               make_cone(apex, axis_world, config.spec.fov_full_angle / 2.0,
                                         config.spec.range)});
        }
    }
    return sensors;
}

SolidPtr fov_union(const std::vector<PlacedSensor>& sensors) {
    if (sensors.empty()) throw std::invalid_argument("fov_union: no sensors");
    std::vector<SolidPtr> cones;
    cones.reserve(sensors.size());
    for (const PlacedSensor& s : sensors) cones.push_back(s.cone);
    return make_union(std::move(cones));
}

}  // namespace tofcover

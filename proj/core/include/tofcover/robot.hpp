#pragma once

#include <string>
#include <vector>

#include "tofcover/geom.hpp"

namespace tofcover {

/// One revolute joint: a fixed offset from the parent frame followed by a
/// rotation about `axis` (expressed in the frame after the offset).
struct Joint {
    Vec3 axis{0, 0, 1};
    RigidTransform origin_offset;
};

struct JointState {
    std::vector<double> angles;  // radians
};

/// Serial-chain robot. Link endpoint k is the origin of the frame after
/// joint k (endpoint 0 is the base origin), so every joint offset must carry
/// a nonzero translation for the endpoints to stay distinct.
class RobotModel {
  public:
    RobotModel(std::string name, std::vector<Joint> joints, double self_occupancy_radius);

    /// Bundled UR10-like arm: manufacturer link lengths, pan/lift/elbow plus
    /// a three-joint wrist, 7 link endpoints.
    static RobotModel ur10_like();

    /// Parses the JSON model file (see data/ur10_like.json for the schema).
    /// Validates home_endpoints against forward kinematics at q = 0.
    static RobotModel load(const std::string& path);

    const std::string& name() const { return name_; }
    const std::vector<Joint>& joints() const { return joints_; }
    int joint_count() const { return static_cast<int>(joints_.size()); }
    int link_endpoint_count() const { return joint_count() + 1; }
    double self_occupancy_radius() const { return self_occupancy_radius_; }
    /// Fixed distances between consecutive link endpoints.
    const std::vector<double>& link_lengths() const { return link_lengths_; }

    JointState zero_state() const { return JointState{std::vector<double>(joints_.size(), 0.0)}; }

  private:
    std::string name_;
    std::vector<Joint> joints_;
    double self_occupancy_radius_;
    std::vector<double> link_lengths_;
};

/// Forward-kinematics result for one joint state.
struct PoseSnapshot {
    std::vector<Vec3> link_endpoints;        // P_0..P_n
    std::vector<RigidTransform> link_frames; // frame after each joint
    RigidTransform tcp_frame;                // == link_frames.back()
};

/// Product-of-transforms chain. base_frame premultiplies everything, so
/// posing the robot elsewhere is an exact isometry of all endpoints.
PoseSnapshot forward_kinematics(const RobotModel& model, const JointState& q,
                                const RigidTransform& base_frame = RigidTransform::identity());

/// Pick-and-place task: the base joint sweeps between two angles while the
/// remaining joints hold a fixed posture.
struct TaskSpec {
    double base_start = 0.0;          // radians
    double base_end = kPi;            // radians
    std::vector<double> posture;      // radians for joints 1..n-1
};

/// Joint state at the given phase of the base sweep. Phase 0.5 is the
/// mid-motion pose used for coverage measurements.
JointState task_pose(const RobotModel& model, const TaskSpec& task, double phase);

}  // namespace tofcover

#include "tofcover/robot.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tofcover {

RobotModel::RobotModel(std::string name, std::vector<Joint> joints, double self_occupancy_radius)
    : name_(std::move(name)), joints_(std::move(joints)),
      self_occupancy_radius_(self_occupancy_radius) {
    if (joints_.empty()) throw std::invalid_argument("RobotModel: joint list empty");
    if (!(self_occupancy_radius_ > 0.0))
        throw std::invalid_argument("RobotModel: self_occupancy_radius must be positive");
    for (auto& j : joints_) {
        if (std::abs(j.axis.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("RobotModel: joint axis not unit length");
        const double len = j.origin_offset.translation().norm();
        if (len <= 1e-9)
            throw std::invalid_argument(
                "RobotModel: joint offset translation must be nonzero (distinct link endpoints)");
        link_lengths_.push_back(len);
    }
}

RobotModel RobotModel::ur10_like() {
    // Link lengths from the manufacturer's published UR10 kinematics:
    // base column d1, shoulder bracket, upper arm a2, forearm a3, wrist
    // bracket d5, flange d6.
    const Vec3 x(1, 0, 0), y(0, 1, 0), z(0, 0, 1);
    std::vector<Joint> joints;
    joints.push_back({z, RigidTransform::translate(Vec3(0, 0, 0.1273))});     // pan
    joints.push_back({y, RigidTransform::translate(Vec3(0, 0.163941, 0))});   // lift
    joints.push_back({y, RigidTransform::translate(Vec3(0, 0, 0.612))});      // elbow
    joints.push_back({y, RigidTransform::translate(Vec3(0, 0, 0.5723))});     // wrist 1
    joints.push_back({x, RigidTransform::translate(Vec3(0, 0.1157, 0))});     // wrist 2
    joints.push_back({z, RigidTransform::translate(Vec3(0, 0, 0.0922))});     // wrist 3
    return RobotModel("ur10_like", std::move(joints), 0.15);
}

PoseSnapshot forward_kinematics(const RobotModel& model, const JointState& q,
                                const RigidTransform& base_frame) {
    if (static_cast<int>(q.angles.size()) != model.joint_count())
        throw std::invalid_argument("forward_kinematics: joint state arity mismatch");
    for (double a : q.angles)
        if (!std::isfinite(a))
            throw std::invalid_argument("forward_kinematics: non-finite joint angle");

    PoseSnapshot pose;
    pose.link_endpoints.reserve(static_cast<size_t>(model.link_endpoint_count()));
    pose.link_frames.reserve(model.joints().size());

    RigidTransform frame = base_frame;
    pose.link_endpoints.push_back(frame.translation());
    for (size_t i = 0; i < model.joints().size(); ++i) {
        const Joint& joint = model.joints()[i];
        frame = frame.compose(joint.origin_offset)
                    .compose(RigidTransform::rotate(joint.axis, q.angles[i]));
        pose.link_frames.push_back(frame);
        pose.link_endpoints.push_back(frame.translation());
    }
    pose.tcp_frame = pose.link_frames.back();
    return pose;
}

JointState task_pose(const RobotModel& model, const TaskSpec& task, double phase) {
    if (!(phase >= 0.0 && phase <= 1.0))
        throw std::invalid_argument("task_pose: phase outside [0, 1]");
    if (static_cast<int>(task.posture.size()) != model.joint_count() - 1)
        throw std::invalid_argument("task_pose: posture must cover joints after the base");
    JointState q;
    q.angles.push_back(task.base_start + (task.base_end - task.base_start) * phase);
    q.angles.insert(q.angles.end(), task.posture.begin(), task.posture.end());
    return q;
}

// ---------------------------------------------------------------------------
// Model file
// ---------------------------------------------------------------------------

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string("robot model: ") + what + " must be [x, y, z]");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

RobotModel RobotModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("robot model: cannot open " + path);
    nlohmann::json doc = nlohmann::json::parse(in);

    std::vector<Joint> joints;
    for (const auto& jj : doc.at("joints")) {
        Joint joint;
        joint.axis = vec3_from_json(jj.at("axis"), "joint axis").normalized();
        const Vec3 t = vec3_from_json(jj.at("offset_translation"), "offset_translation");
        Mat3 r = Mat3::identity();
        if (jj.contains("offset_rpy_deg")) {
            const Vec3 rpy = vec3_from_json(jj.at("offset_rpy_deg"), "offset_rpy_deg");
            r = Mat3::from_rpy(deg_to_rad(rpy.x), deg_to_rad(rpy.y), deg_to_rad(rpy.z));
        }
        joint.origin_offset = RigidTransform(r, t);
        joints.push_back(joint);
    }

    RobotModel model(doc.at("name").get<std::string>(), std::move(joints),
                     doc.at("self_occupancy_radius").get<double>());

    if (doc.contains("home_endpoints")) {
        const auto& home = doc.at("home_endpoints");
        if (static_cast<int>(home.size()) != model.link_endpoint_count())
            throw std::invalid_argument("robot model: home_endpoints count mismatch");
        const PoseSnapshot pose = forward_kinematics(model, model.zero_state());
        for (size_t i = 0; i < home.size(); ++i) {
            const Vec3 want = vec3_from_json(home[i], "home endpoint");
            if (distance(want, pose.link_endpoints[i]) > 1e-6) {
                std::ostringstream msg;
                msg << "robot model: home_endpoints[" << i
                    << "] disagrees with forward kinematics at q = 0";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    return model;
}

}  // namespace tofcover

#include "tofcover/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tofcover/version.hpp"

namespace tofcover {

namespace {

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

/// Sanitizes an exception message into a CSV-safe error token.
std::string error_token(const std::string& what) {
    std::string out = "error_";
    for (char c : what) {
        if (c == ',' || c == '\n') c = ' ';
        out.push_back(c == ' ' ? '_' : c);
    }
    return out;
}

int theta_from_label(const std::string& label) {
    const auto pos = label.rfind('_');
    if (pos == std::string::npos) return 0;
    try {
        return std::stoi(label.substr(pos + 1));
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

ExperimentSpec::ExperimentSpec() {
    // Elbow-up reaching posture for the bundled arm; the base joint sweeps
    // 180 degrees between pick and place.
    task.base_start = 0.0;
    task.base_end = kPi;
    task.posture = {deg_to_rad(60.0), deg_to_rad(60.0), deg_to_rad(-30.0), 0.0, 0.0};
}

RobotModel ExperimentSpec::load_model() const {
    if (robot_model_path.empty() || robot_model_path == "builtin") return RobotModel::ur10_like();
    return RobotModel::load(robot_model_path);
}

// ---------------------------------------------------------------------------
// JSON config
// ---------------------------------------------------------------------------

namespace {

Vec3 vec3_of(const nlohmann::json& j) {
    return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

MaxVolumeKind vmax_of(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "operating")
        return MaxVolumeKind::operating(j.value("radius", 1.3));
    if (kind == "tool") return MaxVolumeKind::tool(j.value("radius", 1.5));
    if (kind == "operating_tool")
        return MaxVolumeKind::operating_plus_tool(j.value("radius", 1.3),
                                                  j.value("tool_radius", 1.5));
    if (kind == "shell") return MaxVolumeKind::shell(j.at("radius").get<double>());
    throw std::invalid_argument("experiment config: unknown vmax kind '" + kind + "'");
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("experiment config: cannot open " + path);
    const nlohmann::json doc = nlohmann::json::parse(in);

    ExperimentSpec spec;
    spec.robot_model_path = doc.value("robot_model", spec.robot_model_path);

    if (doc.contains("task")) {
        const auto& t = doc.at("task");
        spec.task.base_start = deg_to_rad(t.value("base_start_deg", 0.0));
        spec.task.base_end = deg_to_rad(t.value("base_end_deg", 180.0));
        if (t.contains("posture_deg")) {
            spec.task.posture.clear();
            for (const auto& a : t.at("posture_deg"))
                spec.task.posture.push_back(deg_to_rad(a.get<double>()));
        }
    }
    spec.pose_phase = doc.value("pose_phase", spec.pose_phase);

    if (doc.contains("configs"))
        spec.configs = doc.at("configs").get<std::vector<std::string>>();
    if (doc.contains("vmax")) {
        spec.vmax_kinds.clear();
        for (const auto& v : doc.at("vmax")) spec.vmax_kinds.push_back(vmax_of(v));
    }

    if (doc.contains("domain")) {
        const auto& d = doc.at("domain");
        if (d.contains("center")) spec.domain_center = vec3_of(d.at("center"));
        spec.domain_edge = d.value("edge", spec.domain_edge);
        spec.max_depth = d.value("max_depth", spec.max_depth);
    }

    if (doc.contains("curve")) {
        const auto& c = doc.at("curve");
        spec.interpolation_factor = c.value("interpolation_factor", spec.interpolation_factor);
        spec.samples_per_segment = c.value("samples_per_segment", spec.samples_per_segment);
    }

    if (doc.contains("sensor")) {
        const auto& s = doc.at("sensor");
        spec.sensor.range = s.value("range", spec.sensor.range);
        if (s.contains("fov_deg")) spec.sensor.fov_full_angle = deg_to_rad(s.at("fov_deg").get<double>());
    }

    if (doc.contains("rings")) {
        const auto& r = doc.at("rings");
        spec.layout.shoulder_link = r.value("shoulder_link", spec.layout.shoulder_link);
        spec.layout.elbow_link = r.value("elbow_link", spec.layout.elbow_link);
        spec.layout.center_axial = r.value("center_axial", spec.layout.center_axial);
        if (r.contains("dual_axials")) {
            spec.layout.dual_axial_proximal = r.at("dual_axials").at(0).get<double>();
            spec.layout.dual_axial_distal = r.at("dual_axials").at(1).get<double>();
        }
        spec.layout.dual_tilt_sign_proximal =
            r.value("proximal_tilt_sign", spec.layout.dual_tilt_sign_proximal);
        spec.layout.dual_tilt_sign_distal =
            r.value("distal_tilt_sign", spec.layout.dual_tilt_sign_distal);
        spec.layout.ring_radius = r.value("ring_radius", spec.layout.ring_radius);
        spec.layout.tool_link = r.value("tool_link", spec.layout.tool_link);
        spec.layout.tool_axial = r.value("tool_axial", spec.layout.tool_axial);
        spec.layout.tool_sensor_count = r.value("tool_sensor_count", spec.layout.tool_sensor_count);
    }

    if (doc.contains("operating_center_offset"))
        spec.volumes.operating_center_offset = vec3_of(doc.at("operating_center_offset"));

    if (doc.contains("theta_range_deg"))
        spec.theta_range_deg = doc.at("theta_range_deg").get<std::vector<int>>();
    if (doc.contains("shell_radii"))
        spec.shell_radii = doc.at("shell_radii").get<std::vector<double>>();

    if (doc.contains("probe")) {
        const auto& p = doc.at("probe");
        spec.probe.object_radius = p.value("object_radius", spec.probe.object_radius);
        spec.probe.samples = p.value("samples", spec.probe.samples);
        if (p.contains("band")) {
            spec.probe.band_min = p.at("band").at(0).get<double>();
            spec.probe.band_max = p.at("band").at(1).get<double>();
        }
        if (p.contains("waypoints"))
            for (const auto& w : p.at("waypoints")) spec.probe.waypoints.push_back(vec3_of(w));
    }

    spec.output_dir = doc.value("output_dir", spec.output_dir);
    spec.seed = doc.value("seed", spec.seed);
    spec.jobs = doc.value("jobs", spec.jobs);
    spec.early_out = doc.value("early_out", spec.early_out);
    return spec;
}

// ---------------------------------------------------------------------------
// Plans
// ---------------------------------------------------------------------------

std::vector<PlannedRow> plan_config_sweep(const ExperimentSpec& spec) {
    std::vector<PlannedRow> plan;
    for (const std::string& config : spec.configs)
        for (const MaxVolumeKind& kind : spec.vmax_kinds) plan.push_back({config, kind});
    return plan;
}

std::vector<PlannedRow> plan_theta_sweep(const ExperimentSpec& spec,
                                         const std::vector<int>& thetas_deg) {
    std::vector<PlannedRow> plan;
    for (int theta : thetas_deg) {
        const std::string config = format_config_label(2, 16, theta);
        for (const MaxVolumeKind& kind : spec.vmax_kinds) plan.push_back({config, kind});
    }
    return plan;
}

std::vector<PlannedRow> plan_shell_sweep(const ExperimentSpec& spec,
                                         const std::vector<double>& radii) {
    std::vector<PlannedRow> plan;
    for (int theta : spec.theta_range_deg)
        for (double r : radii)
            plan.push_back({format_config_label(2, 16, theta), MaxVolumeKind::shell(r)});
    for (double r : radii) plan.push_back({format_config_label(3, 16, 55), MaxVolumeKind::shell(r)});
    return plan;
}

// ---------------------------------------------------------------------------
// CSV formatting
// ---------------------------------------------------------------------------

std::string SweepRow::csv_header() {
    return "config,vmax,r_param,theta_deg,zeta_percent,lambda_vmax_m3,lambda_leftover_m3,"
           "voxel_size_m,max_depth,pose_phase,warnings";
}

std::string SweepRow::csv_line() const {
    std::ostringstream os;
    os << config << ',' << vmax_name << ',' << fmt("%.3f", r_param) << ',' << theta_deg << ','
       << fmt("%.6f", zeta_percent) << ',' << fmt("%.9f", lambda_vmax) << ','
       << fmt("%.9f", lambda_leftover) << ',' << fmt("%.6f", voxel_size) << ',' << max_depth << ','
       << fmt("%.3f", pose_phase) << ',' << warnings;
    return os.str();
}

std::string SweepRow::key() const {
    std::ostringstream os;
    os << config << '|' << vmax_name << '|' << fmt("%.3f", r_param) << '|' << theta_deg << '|'
       << fmt("%.6f", voxel_size) << '|' << max_depth << '|' << fmt("%.3f", pose_phase);
    return os.str();
}

// ---------------------------------------------------------------------------
// Sweep runner
// ---------------------------------------------------------------------------

namespace {

struct PoseContext {
    RobotModel model;
    PoseSnapshot pose;
    std::shared_ptr<const PiecewiseBezierCurve> curve;
    VoxelDomain domain;
    VoxelizeOptions vox;

    explicit PoseContext(const ExperimentSpec& spec)
        : model(spec.load_model()), domain(spec.make_domain()) {
        const JointState q = task_pose(model, spec.task, spec.pose_phase);
        pose = forward_kinematics(model, q);
        curve = std::make_shared<PiecewiseBezierCurve>(PiecewiseBezierCurve::build(
            pose.link_endpoints, spec.interpolation_factor, spec.samples_per_segment));
        vox.early_out = spec.early_out;
    }
};

std::string vmax_cache_key(const MaxVolumeKind& kind) {
    return kind.name() + "|" + fmt("%.6f", kind.radius) + "|" + fmt("%.6f", kind.tool_radius);
}

void dump_octree(const std::string& dir, const std::string& name, const Octree& tree) {
    std::filesystem::create_directories(dir);
    const auto bytes = tree.serialize();
    std::ofstream out(dir + "/" + name + ".oct", std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const std::vector<PlannedRow>& plan) {
    PoseContext ctx(spec);

    // Self volume and the V_max reference trees (V_max minus V_R) are shared
    // across all rows.
    const Octree vr = voxelize(*make_self_volume(ctx.model, ctx.curve), ctx.domain, ctx.vox);
    if (spec.dump_octrees) dump_octree(spec.output_dir + "/octrees", "vr", vr);

    struct Reference {
        std::optional<Octree> tree;
        std::string error;
        std::string pappus_warning;
    };
    std::map<std::string, Reference> references;
    for (const PlannedRow& row : plan) {
        const std::string key = vmax_cache_key(row.vmax);
        if (references.count(key)) continue;
        Reference ref;
        try {
            const SolidPtr solid = make_vmax(row.vmax, ctx.pose, ctx.model, ctx.curve, spec.volumes);
            ref.tree = subtract(voxelize(*solid, ctx.domain, ctx.vox), vr);
            if (row.vmax.type == MaxVolumeKind::Type::Shell) {
                const auto pappus = pappus_shell_volume(*ctx.curve, ctx.model.self_occupancy_radius(),
                                                        row.vmax.radius);
                if (pappus.curvature_warning) ref.pappus_warning = "pappus_curvature";
            }
            if (spec.dump_octrees)
                dump_octree(spec.output_dir + "/octrees",
                            "vmax_" + row.vmax.name() + "_" + fmt("%.3f", row.vmax.r_param()),
                            *ref.tree);
        } catch (const std::exception& e) {
            ref.error = error_token(e.what());
        }
        references.emplace(key, std::move(ref));
    }

    // Group rows by config; each group voxelizes its FOV union once.
    std::vector<std::string> config_order;
    std::map<std::string, std::vector<size_t>> rows_of_config;
    for (size_t i = 0; i < plan.size(); ++i) {
        if (!rows_of_config.count(plan[i].config)) config_order.push_back(plan[i].config);
        rows_of_config[plan[i].config].push_back(i);
    }

    std::vector<SweepRow> rows(plan.size());
    const Octree vr_placeholder = Octree::empty(ctx.domain);

    auto run_config = [&](const std::string& config) {
        std::optional<Octree> fov;
        std::string config_error;
        try {
            const SensorConfig sensors = parse_config_label(config, spec.sensor, spec.layout);
            const auto placed = place_sensors(sensors, ctx.pose);
            fov = voxelize(*fov_union(placed), ctx.domain, ctx.vox);
            if (spec.dump_octrees) dump_octree(spec.output_dir + "/octrees", "fov_" + config, *fov);
        } catch (const std::exception& e) {
            config_error = error_token(e.what());
        }

        for (size_t idx : rows_of_config[config]) {
            const PlannedRow& planned = plan[idx];
            SweepRow row;
            row.config = config;
            row.vmax_name = planned.vmax.name();
            row.r_param = planned.vmax.r_param();
            row.theta_deg = theta_from_label(config);
            row.voxel_size = ctx.domain.voxel_size();
            row.max_depth = ctx.domain.max_depth;
            row.pose_phase = spec.pose_phase;

            const Reference& ref = references.at(vmax_cache_key(planned.vmax));
            if (!config_error.empty()) {
                row.failed = true;
                row.warnings = config_error;
            } else if (!ref.error.empty()) {
                row.failed = true;
                row.warnings = ref.error;
            } else {
                try {
                    const CoverageResult cov = coverage(*ref.tree, *fov, vr_placeholder, true);
                    row.zeta_percent = cov.zeta_percent;
                    row.lambda_vmax = cov.lambda_vmax;
                    row.lambda_leftover = cov.lambda_leftover;
                    row.warnings = ref.pappus_warning;
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.warnings = error_token(e.what());
                }
            }
            rows[idx] = std::move(row);
        }
    };

    int jobs = spec.jobs > 0 ? spec.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, static_cast<int>(config_order.size()));
    if (jobs <= 1) {
        for (const std::string& config : config_order) run_config(config);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < config_order.size(); i = next.fetch_add(1))
                    run_config(config_order[i]);
            });
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::vector<SweepRow> run_sweep_to_csv(const ExperimentSpec& spec,
                                       const std::vector<PlannedRow>& plan,
                                       const std::string& csv_path) {
    // Resume: keep verbatim lines of measurements already on disk.
    std::map<std::string, std::string> existing;
    if (!spec.force && std::filesystem::exists(csv_path)) {
        std::ifstream in(csv_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line.rfind("config,", 0) == 0) continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ',')) fields.push_back(field);
            if (fields.size() < 10) continue;
            const std::string key = fields[0] + '|' + fields[1] + '|' + fields[2] + '|' +
                                    fields[3] + '|' + fields[7] + '|' + fields[8] + '|' +
                                    fields[9];
            existing.emplace(key, line);
        }
    }

    // Template rows give each planned row its resume key without computing.
    std::vector<SweepRow> merged(plan.size());
    std::vector<PlannedRow> missing;
    std::vector<size_t> missing_idx;
    {
        const VoxelDomain domain = VoxelDomain::centered(spec.domain_center, spec.domain_edge,
                                                         spec.max_depth);
        for (size_t i = 0; i < plan.size(); ++i) {
            SweepRow& row = merged[i];
            row.config = plan[i].config;
            row.vmax_name = plan[i].vmax.name();
            row.r_param = plan[i].vmax.r_param();
            row.theta_deg = theta_from_label(plan[i].config);
            row.voxel_size = domain.voxel_size();
            row.max_depth = domain.max_depth;
            row.pose_phase = spec.pose_phase;
            if (!existing.count(row.key())) {
                missing.push_back(plan[i]);
                missing_idx.push_back(i);
            }
        }
    }

    std::vector<SweepRow> computed;
    if (!missing.empty()) computed = run_sweep(spec, missing);

    std::filesystem::create_directories(
        std::filesystem::path(csv_path).parent_path().empty()
            ? "."
            : std::filesystem::path(csv_path).parent_path().string());
    std::ofstream out(csv_path, std::ios::trunc);
    out << "# tofcover " << kVersion << "\n" << SweepRow::csv_header() << "\n";
    size_t next_missing = 0;
    for (size_t i = 0; i < merged.size(); ++i) {
        if (next_missing < missing_idx.size() && missing_idx[next_missing] == i) {
            merged[i] = computed[next_missing];
            ++next_missing;
            out << merged[i].csv_line() << "\n";
        } else {
            out << existing.at(merged[i].key()) << "\n";
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Minimum-distance probe
// ---------------------------------------------------------------------------

std::vector<Vec3> generate_probe_waypoints(const PiecewiseBezierCurve& curve,
                                           const ProbeSpec& probe, std::uint64_t seed) {
    if (!probe.waypoints.empty()) return probe.waypoints;
    if (probe.samples < 1) throw std::invalid_argument("probe: samples must be >= 1");
    if (!(probe.band_min > 0.0 && probe.band_min < probe.band_max))
        throw std::invalid_argument("probe: need 0 < band_min < band_max");

    std::mt19937_64 rng(seed);
    const Aabb box = curve.bounding_box().inflated(probe.band_max);
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
    std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
    std::uniform_real_distribution<double> uz(box.lo.z, box.hi.z);

    std::vector<Vec3> points;
    const long max_attempts = 100000L * probe.samples;
    for (long attempt = 0; attempt < max_attempts && static_cast<int>(points.size()) < probe.samples;
         ++attempt) {
        const Vec3 p(ux(rng), uy(rng), uz(rng));
        const double d = curve.closest(p).distance;
        if (d >= probe.band_min && d <= probe.band_max) points.push_back(p);
    }
    if (static_cast<int>(points.size()) < probe.samples)
        throw std::runtime_error("probe: could not place waypoints in the distance band");
    return points;
}

namespace {

/// First ray-sphere hit distance within [0, range], or +inf.
double ray_sphere_hit(const Vec3& origin, const Vec3& dir, const Vec3& center, double radius,
                      double range) {
    const Vec3 m = center - origin;
    const double b = dir.dot(m);
    const double disc = b * b - (m.norm2() - radius * radius);
    if (disc < 0.0) return std::numeric_limits<double>::infinity();
    const double t = b - std::sqrt(disc);
    if (t < 0.0 || t > range) return std::numeric_limits<double>::infinity();
    return t;
}

/// Ray fan per sensor: central axis, 8 rays on the cone boundary, 8 at half
/// the boundary angle.
std::vector<std::pair<double, double>> probe_ray_fan(double half_angle) {
    std::vector<std::pair<double, double>> fan = {{0.0, 0.0}};
    for (int k = 0; k < 8; ++k) fan.push_back({half_angle, 2.0 * kPi * k / 8.0});
    for (int k = 0; k < 8; ++k) fan.push_back({half_angle / 2.0, 2.0 * kPi * k / 8.0});
    return fan;
}

}  // namespace

ProbeMeasurement probe_measure(const std::vector<PlacedSensor>& sensors, const SensorSpec& spec,
                               const Vec3& waypoint, double object_radius) {
    const auto fan = probe_ray_fan(spec.fov_full_angle / 2.0);
    double measured = std::numeric_limits<double>::infinity();
    for (const PlacedSensor& s : sensors) {
        const Vec3 origin = s.pose.translation();
        const Vec3 zs = s.pose.apply_direction(Vec3(0, 0, 1));
        const Vec3 xs = s.pose.apply_direction(Vec3(1, 0, 0));
        const Vec3 ys = s.pose.apply_direction(Vec3(0, 1, 0));
        for (const auto& [beta, phi] : fan) {
            const Vec3 dir = zs * std::cos(beta) +
                             (xs * std::cos(phi) + ys * std::sin(phi)) * std::sin(beta);
            measured = std::min(measured,
                                ray_sphere_hit(origin, dir, waypoint, object_radius, spec.range));
        }
    }
    if (!std::isfinite(measured)) return {spec.range, false};
    return {measured, true};
}

std::vector<ProbeRow> run_min_distance_probe(const ExperimentSpec& spec, const ProbeSpec& probe,
                                             const std::vector<std::string>& config_labels) {
    if (config_labels.empty())
        throw std::invalid_argument("probe: no configs given");

    PoseContext ctx(spec);
    const std::vector<Vec3> waypoints = generate_probe_waypoints(*ctx.curve, probe, spec.seed);
    if (waypoints.empty()) throw std::invalid_argument("probe: empty trajectory");

    std::vector<ProbeRow> rows;
    for (const std::string& label : config_labels) {
        const SensorConfig config = parse_config_label(label, spec.sensor, spec.layout);
        const auto sensors = place_sensors(config, ctx.pose);

        ProbeRow row;
        row.config = config.label;
        row.object_radius = probe.object_radius;
        row.waypoints = static_cast<int>(waypoints.size());
        row.seed = spec.seed;

        double sum_sq = 0.0;
        double max_abs = 0.0;
        for (const Vec3& wp : waypoints) {
            const double ground_truth =
                std::max(0.0, ctx.curve->closest(wp).distance - probe.object_radius);
            const ProbeMeasurement m =
                probe_measure(sensors, spec.sensor, wp, probe.object_radius);
            if (m.seen) {
                ++row.seen_count;
                const double err = m.measured - ground_truth;
                sum_sq += err * err;
                max_abs = std::max(max_abs, std::abs(err));
            }
        }
        row.seen_fraction = static_cast<double>(row.seen_count) / row.waypoints;
        row.rmse = row.seen_count > 0 ? std::sqrt(sum_sq / row.seen_count) : 0.0;
        row.max_error = max_abs;
        rows.push_back(row);
    }
    return rows;
}

std::string ProbeRow::csv_header() {
    return "config,object_radius_m,waypoints,seen_count,seen_fraction,rmse_m,max_error_m,seed";
}

std::string ProbeRow::csv_line() const {
    std::ostringstream os;
    os << config << ',' << fmt("%.3f", object_radius) << ',' << waypoints << ',' << seen_count
       << ',' << fmt("%.6f", seen_fraction) << ',';
    if (seen_count > 0)
        os << fmt("%.6f", rmse) << ',' << fmt("%.6f", max_error);
    else
        os << "na,na";
    os << ',' << seed;
    return os.str();
}

void write_probe_csv(const std::string& path, const std::vector<ProbeRow>& rows) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::trunc);
    out << "# tofcover " << kVersion << "\n" << ProbeRow::csv_header() << "\n";
    for (const ProbeRow& row : rows) out << row.csv_line() << "\n";
}

}  // namespace tofcover

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tofcover/coverage.hpp"
#include "tofcover/rings.hpp"

namespace tofcover {

/// Synthetic probe object for the minimum-distance harness: a sphere moved
/// through waypoints in a radial band around the robot. Empty waypoints are
/// generated from the experiment seed.
struct ProbeSpec {
    double object_radius = 0.1;  // meters
    int samples = 200;
    double band_min = 0.3;  // distance from the pose curve, meters
    double band_max = 1.5;
    std::vector<Vec3> waypoints;
};

/// Everything a measurement campaign needs. Field-for-field mirror of the
/// JSON experiment config; every field has a usable default.
struct ExperimentSpec {
    std::string robot_model_path;  // empty or "builtin": bundled UR10-like arm

    TaskSpec task;
    double pose_phase = 0.5;  // mid-sweep, the least-safe pose

    std::vector<std::string> configs = {"n1_8_0",   "n1_16_0",  "n2_16_10",
                                        "n2_16_25", "n2_16_55", "n3_16_55"};
    std::vector<MaxVolumeKind> vmax_kinds = {
        MaxVolumeKind::operating(), MaxVolumeKind::tool(), MaxVolumeKind::operating_plus_tool(),
        MaxVolumeKind::shell(0.9)};

    Vec3 domain_center{0, 0, 0};
    double domain_edge = 6.4;
    int max_depth = 8;

    double interpolation_factor = 0.25;
    int samples_per_segment = 64;

    SensorSpec sensor;
    RingLayoutOptions layout;
    CoverageVolumeOptions volumes;

    std::vector<int> theta_range_deg = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    std::vector<double> shell_radii = {0.5, 0.7, 0.9, 1.1, 1.5};

    ProbeSpec probe;

    std::string output_dir = "out";
    std::uint64_t seed = 12345;
    int jobs = 0;  // 0 = hardware concurrency
    bool early_out = true;
    bool force = false;
    bool dump_octrees = false;

    ExperimentSpec();

    /// Parses the JSON experiment config; missing fields keep defaults.
    static ExperimentSpec from_json_file(const std::string& path);

    RobotModel load_model() const;
    VoxelDomain make_domain() const {
        return VoxelDomain::centered(domain_center, domain_edge, max_depth);
    }
};

/// One planned (config, V_max) measurement.
struct PlannedRow {
    std::string config;
    MaxVolumeKind vmax;
};

std::vector<PlannedRow> plan_config_sweep(const ExperimentSpec& spec);
std::vector<PlannedRow> plan_theta_sweep(const ExperimentSpec& spec,
                                         const std::vector<int>& thetas_deg);
std::vector<PlannedRow> plan_shell_sweep(const ExperimentSpec& spec,
                                         const std::vector<double>& radii);

/// One CSV row. Schema (exact column order):
/// config,vmax,r_param,theta_deg,zeta_percent,lambda_vmax_m3,
/// lambda_leftover_m3,voxel_size_m,max_depth,pose_phase,warnings
struct SweepRow {
    std::string config;
    std::string vmax_name;
    double r_param = 0.0;
    int theta_deg = 0;
    double zeta_percent = 0.0;
    double lambda_vmax = 0.0;
    double lambda_leftover = 0.0;
    double voxel_size = 0.0;
    int max_depth = 0;
    double pose_phase = 0.5;
    std::string warnings;  // ';'-joined notes, or error_* when failed
    bool failed = false;

    static std::string csv_header();
    std::string csv_line() const;
    /// Identity of the measurement: config, vmax, r_param, theta and the
    /// domain/pose settings. Used for resume matching.
    std::string key() const;
};

/// Executes a plan: voxelizes each V_max (minus the robot self volume) and
/// each config's FOV union once, combines them per row. Configs run on a
/// bounded worker pool (spec.jobs); row order is the plan order regardless
/// of scheduling. Per-row failures become error rows, the run continues.
std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, const std::vector<PlannedRow>& plan);

/// run_sweep plus CSV persistence: rows already present in csv_path (matched
/// by key) are kept verbatim and not recomputed unless spec.force is set.
/// Returns the merged rows in plan order.
std::vector<SweepRow> run_sweep_to_csv(const ExperimentSpec& spec,
                                       const std::vector<PlannedRow>& plan,
                                       const std::string& csv_path);

/// Minimum-distance probe result for one config over a shared trajectory.
/// RMSE and max error are over the waypoints at least one sensor saw;
/// unseen waypoints clamp to the sensor range in the per-waypoint data but
/// are excluded from the error stats.
struct ProbeRow {
    std::string config;
    double object_radius = 0.0;
    int waypoints = 0;
    int seen_count = 0;
    double seen_fraction = 0.0;
    double rmse = 0.0;       // meters; meaningless when seen_count == 0
    double max_error = 0.0;  // meters, absolute
    std::uint64_t seed = 0;

    static std::string csv_header();
    std::string csv_line() const;
};

/// Seeded waypoint generation in the [band_min, band_max] distance band
/// around the pose curve (or ProbeSpec::waypoints verbatim when present).
std::vector<Vec3> generate_probe_waypoints(const PiecewiseBezierCurve& curve,
                                           const ProbeSpec& probe, std::uint64_t seed);

/// What the sensor set reports for one probe sphere: the nearest ray-fan hit
/// across all sensors. Unseen waypoints clamp to the sensor range, mirroring
/// a real sensor returning max range.
struct ProbeMeasurement {
    double measured = 0.0;
    bool seen = false;
};
ProbeMeasurement probe_measure(const std::vector<PlacedSensor>& sensors, const SensorSpec& spec,
                               const Vec3& waypoint, double object_radius);

/// Ground truth per waypoint is sphere-surface-to-curve distance; measured
/// is the nearest ray-fan hit over all sensors (central ray plus 8 rays at
/// the cone boundary and 8 at half the boundary angle).
std::vector<ProbeRow> run_min_distance_probe(const ExperimentSpec& spec, const ProbeSpec& probe,
                                             const std::vector<std::string>& config_labels);

void write_probe_csv(const std::string& path, const std::vector<ProbeRow>& rows);

}  // namespace tofcover

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_helpers.hpp"
#include "tofcover/experiment.hpp"
#include "tofcover/plot.hpp"

using namespace tofcover;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Coarse, fast settings for structural tests.
ExperimentSpec coarse_spec(const std::string& out_dir) {
    ExperimentSpec spec;
    spec.max_depth = 5;
    spec.configs = {"n1_8_0", "n1_16_0"};
    spec.vmax_kinds = {MaxVolumeKind::operating(), MaxVolumeKind::shell(0.9)};
    spec.output_dir = out_dir;
    spec.jobs = 2;
    return spec;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("experiment config file parsing with defaults") {
    TempDir tmp("tofcover_test_config");
    const std::string path = (tmp.path / "exp.json").string();
    {
        std::ofstream out(path);
        out << R"({
  "configs": ["n2_16_25"],
  "vmax": [{"kind": "shell", "radius": 0.5}],
  "domain": {"edge": 3.2, "max_depth": 6},
  "sensor": {"range": 1.2, "fov_deg": 20},
  "seed": 99,
  "task": {"base_start_deg": 0, "base_end_deg": 90, "posture_deg": [45, 30, 0, 0, 0]}
})";
    }
    const ExperimentSpec spec = ExperimentSpec::from_json_file(path);
    CHECK(spec.configs == std::vector<std::string>{"n2_16_25"});
    REQUIRE(spec.vmax_kinds.size() == 1);
    CHECK(spec.vmax_kinds[0].type == MaxVolumeKind::Type::Shell);
    CHECK(spec.vmax_kinds[0].radius == doctest::Approx(0.5));
    CHECK(spec.domain_edge == doctest::Approx(3.2));
    CHECK(spec.max_depth == 6);
    CHECK(spec.sensor.range == doctest::Approx(1.2));
    CHECK(spec.sensor.fov_full_angle == doctest::Approx(deg_to_rad(20)));
    CHECK(spec.seed == 99);
    CHECK(spec.task.base_end == doctest::Approx(kPi / 2.0));
    // Untouched fields keep defaults.
    CHECK(spec.pose_phase == 0.5);
    CHECK(spec.shell_radii.size() == 5);
}

TEST_CASE("plans enumerate config x vmax in order") {
    ExperimentSpec spec;
    spec.configs = {"n1_8_0", "n2_16_25"};
    spec.vmax_kinds = {MaxVolumeKind::operating(), MaxVolumeKind::tool()};
    const auto plan = plan_config_sweep(spec);
    REQUIRE(plan.size() == 4);
    CHECK(plan[0].config == "n1_8_0");
    CHECK(plan[0].vmax.type == MaxVolumeKind::Type::OperatingWorkspace);
    CHECK(plan[3].config == "n2_16_25");
    CHECK(plan[3].vmax.type == MaxVolumeKind::Type::ToolSphere);

    const auto theta_plan = plan_theta_sweep(spec, {0, 5});
    REQUIRE(theta_plan.size() == 4);
    CHECK(theta_plan[0].config == "n2_16_0");
    CHECK(theta_plan[2].config == "n2_16_5");

    spec.theta_range_deg = {0, 55};
    const auto shell_plan = plan_shell_sweep(spec, {0.5, 1.5});
    // 2 thetas x 2 radii + n3_16_55 x 2 radii.
    REQUIRE(shell_plan.size() == 6);
    CHECK(shell_plan.back().config == "n3_16_55");
    CHECK(shell_plan.back().vmax.type == MaxVolumeKind::Type::Shell);
}

TEST_CASE("sweep rows are deterministic and monotone in sensors per ring") {
    TempDir tmp("tofcover_test_sweep");
    ExperimentSpec spec = coarse_spec(tmp.path.string());
    const auto plan = plan_config_sweep(spec);

    const auto rows = run_sweep(spec, plan);
    REQUIRE(rows.size() == 4);
    for (const SweepRow& row : rows) {
        CHECK_FALSE(row.failed);
        CHECK(row.zeta_percent >= 0.0);
        CHECK(row.zeta_percent <= 100.0);
        CHECK(row.voxel_size == doctest::Approx(6.4 / 32.0));
    }
    // n1_16_0 cones are a superset of n1_8_0 cones, so coverage cannot drop.
    CHECK(rows[2].zeta_percent >= rows[0].zeta_percent);
    CHECK(rows[3].zeta_percent >= rows[1].zeta_percent);

    // Bit-identical on rerun.
    const auto again = run_sweep(spec, plan);
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].csv_line() == again[i].csv_line());
}

TEST_CASE("csv output is byte-identical across reruns and resumes") {
    TempDir tmp("tofcover_test_csv");
    ExperimentSpec spec = coarse_spec(tmp.path.string());
    const auto plan = plan_config_sweep(spec);
    const std::string csv = (tmp.path / "sweep.csv").string();

    run_sweep_to_csv(spec, plan, csv);
    const std::string first = slurp(csv);
    CHECK(first.rfind("# tofcover", 0) == 0);
    CHECK(first.find(SweepRow::csv_header()) != std::string::npos);

    // Resume path: everything cached, nothing recomputed, same bytes.
    run_sweep_to_csv(spec, plan, csv);
    CHECK(slurp(csv) == first);

    // Forced recompute still lands on the same bytes.
    spec.force = true;
    run_sweep_to_csv(spec, plan, csv);
    CHECK(slurp(csv) == first);
}

TEST_CASE("resume extends an existing csv with new rows") {
    TempDir tmp("tofcover_test_resume");
    ExperimentSpec spec = coarse_spec(tmp.path.string());
    const std::string csv = (tmp.path / "sweep.csv").string();

    ExperimentSpec small = spec;
    small.configs = {"n1_8_0"};
    run_sweep_to_csv(small, plan_config_sweep(small), csv);
    const std::string partial = slurp(csv);

    const auto merged = run_sweep_to_csv(spec, plan_config_sweep(spec), csv);
    REQUIRE(merged.size() == 4);
    const std::string full = slurp(csv);
    CHECK(full.size() > partial.size());
    // The original rows appear verbatim in the merged file.
    std::istringstream in(partial);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') CHECK(full.find(line) != std::string::npos);
}

TEST_CASE("invalid config labels produce error rows without aborting the run") {
    TempDir tmp("tofcover_test_err");
    ExperimentSpec spec = coarse_spec(tmp.path.string());
    spec.configs = {"n9_9_99", "n1_8_0"};
    const auto rows = run_sweep(spec, plan_config_sweep(spec));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].failed);
    CHECK(rows[0].warnings.rfind("error_", 0) == 0);
    CHECK(rows[1].failed);
    CHECK_FALSE(rows[2].failed);
    CHECK_FALSE(rows[3].failed);
}

TEST_CASE("csv line format matches the documented schema") {
    SweepRow row;
    row.config = "n1_8_0";
    row.vmax_name = "shell";
    row.r_param = 0.9;
    row.theta_deg = 0;
    row.zeta_percent = 42.123456789;
    row.lambda_vmax = 1.5;
    row.lambda_leftover = 0.75;
    row.voxel_size = 0.025;
    row.max_depth = 8;
    row.pose_phase = 0.5;
    CHECK(SweepRow::csv_header() ==
          "config,vmax,r_param,theta_deg,zeta_percent,lambda_vmax_m3,lambda_leftover_m3,"
          "voxel_size_m,max_depth,pose_phase,warnings");
    CHECK(row.csv_line() ==
          "n1_8_0,shell,0.900,0,42.123457,1.500000000,0.750000000,0.025000,8,0.500,");
}

TEST_CASE("probe measurement geometry: sphere dead ahead reads range minus radius") {
    // One synthetic sensor at the origin looking along +z.
    PlacedSensor sensor;
    sensor.pose = RigidTransform::identity();
    SensorSpec spec;
    sensor.cone = make_cone(Vec3(0, 0, 0), Vec3(0, 0, 1), spec.fov_full_angle / 2, spec.range);

    const auto hit = probe_measure({sensor}, spec, Vec3(0, 0, 1.0), 0.1);
    CHECK(hit.seen);
    CHECK(hit.measured == doctest::Approx(0.9).epsilon(1e-12));

    // Beyond range: unseen, clamped to range.
    const auto miss = probe_measure({sensor}, spec, Vec3(0, 0, 3.0), 0.1);
    CHECK_FALSE(miss.seen);
    CHECK(miss.measured == doctest::Approx(spec.range));

    // Far off-axis: unseen.
    const auto side = probe_measure({sensor}, spec, Vec3(1.4, 0, 0.1), 0.1);
    CHECK_FALSE(side.seen);
}

TEST_CASE("probe waypoints are seeded, banded and reproducible") {
    const RobotModel model = RobotModel::ur10_like();
    const PoseSnapshot pose = forward_kinematics(model, model.zero_state());
    const auto curve = std::make_shared<PiecewiseBezierCurve>(
        PiecewiseBezierCurve::build(pose.link_endpoints, 0.25, 64));

    ProbeSpec probe;
    probe.samples = 50;
    const auto a = generate_probe_waypoints(*curve, probe, 42);
    const auto b = generate_probe_waypoints(*curve, probe, 42);
    const auto c = generate_probe_waypoints(*curve, probe, 43);
    REQUIRE(a.size() == 50);
    for (size_t i = 0; i < a.size(); ++i) CHECK(distance(a[i], b[i]) == 0.0);
    bool any_differ = false;
    for (size_t i = 0; i < a.size(); ++i) any_differ |= distance(a[i], c[i]) > 0;
    CHECK(any_differ);
    for (const Vec3& p : a) {
        const double d = curve->closest(p).distance;
        CHECK(d >= probe.band_min);
        CHECK(d <= probe.band_max);
    }
}

TEST_CASE("probe run emits rows and a denser config sees at least as much") {
    ExperimentSpec spec;
    spec.probe.samples = 120;
    const auto rows = run_min_distance_probe(spec, spec.probe, {"n1_8_0", "n2_16_25"});
    REQUIRE(rows.size() == 2);
    for (const ProbeRow& row : rows) {
        CHECK(row.waypoints == 120);
        CHECK(row.seen_count >= 0);
        CHECK(row.seen_fraction == doctest::Approx(double(row.seen_count) / row.waypoints));
    }
    CHECK(rows[1].seen_fraction >= rows[0].seen_fraction);
}

TEST_CASE("probe csv handles the all-unseen marker") {
    ProbeRow row;
    row.config = "n1_8_0";
    row.object_radius = 0.1;
    row.waypoints = 10;
    row.seen_count = 0;
    row.seed = 7;
    CHECK(row.csv_line() == "n1_8_0,0.100,10,0,0.000000,na,na,7");
}

TEST_CASE("charts render to svg with series data") {
    TempDir tmp("tofcover_test_plot");
    std::vector<SweepRow> rows;
    for (int theta : {0, 5, 10}) {
        for (const char* vmax : {"operating", "shell"}) {
            SweepRow row;
            row.config = "n2_16_" + std::to_string(theta);
            row.vmax_name = vmax;
            row.r_param = vmax == std::string("shell") ? 0.5 : 1.3;
            row.theta_deg = theta;
            row.zeta_percent = 10.0 + theta;
            rows.push_back(row);
        }
    }
    CHECK(detect_chart_kind(rows) == ChartKind::ThetaLines);
    const std::string svg =
        render_sweep_chart(rows, ChartKind::ThetaLines, tmp.path.string(), "theta");
    CHECK(fs::exists(svg));
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    CHECK(fs::exists(tmp.path / "theta_series.csv"));

    // Bar chart kind for a plain config sweep.
    for (auto& row : rows) row.config = "n1_8_0";
    CHECK(detect_chart_kind(rows) == ChartKind::ConfigBars);
}

TEST_CASE("sweep csv reads back rows") {
    TempDir tmp("tofcover_test_readback");
    ExperimentSpec spec = coarse_spec(tmp.path.string());
    const std::string csv = (tmp.path / "sweep.csv").string();
    const auto written = run_sweep_to_csv(spec, plan_config_sweep(spec), csv);
    const auto read = read_sweep_csv(csv);
    REQUIRE(read.size() == written.size());
    for (size_t i = 0; i < read.size(); ++i) {
        CHECK(read[i].config == written[i].config);
        CHECK(read[i].zeta_percent == doctest::Approx(written[i].zeta_percent).epsilon(1e-6));
    }
}

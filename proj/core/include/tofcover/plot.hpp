#pragma once

#include <string>
#include <vector>

#include "tofcover/experiment.hpp"

namespace tofcover {

enum class ChartKind { ConfigBars, ThetaLines, ShellLines, ProbeBars };

/// Picks the figure type a sweep CSV naturally renders to: theta sweeps and
/// shell sweeps become line charts over theta, anything else a grouped bar
/// chart per config.
ChartKind detect_chart_kind(const std::vector<SweepRow>& rows);

/// Writes <stem>.svg plus <stem>_series.csv (tidy series,x,y data) under
/// out_dir. Returns the SVG path.
std::string render_sweep_chart(const std::vector<SweepRow>& rows, ChartKind kind,
                               const std::string& out_dir, const std::string& stem);

std::string render_probe_chart(const std::vector<ProbeRow>& rows, const std::string& out_dir,
                               const std::string& stem);

/// Reads rows back from a sweep CSV written by run_sweep_to_csv (error rows
/// are skipped).
std::vector<SweepRow> read_sweep_csv(const std::string& path);

}  // namespace tofcover

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "carpet/dynamics.hpp"
#include "carpet/metrics.hpp"
#include "carpet/raster.hpp"

namespace carpet {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr double kStabilityTolerance = 0.25;
/// Relative step below which consecutive ladder values count as equal.
inline constexpr double kIncreaseTolerance = 1e-9;

struct ExperimentConfig {
  int degree = 3;
  Complex lambda{0.02772313, 0.0};
  Complex center{0.0, 0.0};
  double width = 3.2;
  double height = 3.2;
  int resolution = 512;
  /// Resolutions for `metrics`; empty means {resolution}. Strictly increasing.
  std::vector<int> ladder;
  int max_iter = 500;
  double escape_radius = 0.0;
  std::int64_t min_area = 20;
  std::size_t max_pairs = 2'000'000;
  bool exclude_clipped = true;
  /// Number of largest retained components measured by `metrics`.
  int top = 20;
  bool supersample = false;
  /// Julia-set band width in pixels (see GridSpec::boundary_width).
  double boundary_width = 1.0;
  /// Worker count for the parallel kernels; never affects outputs.
  int threads = 0;
  std::filesystem::path out = "out";

  void validate() const;
  std::vector<int> resolutions() const;
  GridSpec grid(int res) const;
  MapSpec map() const;
};

/// Applies one setting by flag name (e.g. "lambda-re", "ladder", "exclude-clipped").
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

/// Deterministic "key = value" echo of every output-affecting setting.
std::string describe_config(const ExperimentConfig& config);

/// Provenance timestamp: SOURCE_DATE_EPOCH when set, "unset" otherwise.
std::string provenance_timestamp();

struct RenderResult {
  ClassifiedGrid grid;
  std::vector<std::filesystem::path> files;
};

/// Two-tone and escape-time PPMs plus manifest.txt in config.out.
RenderResult cmd_render(const ExperimentConfig& config);

struct ComponentRow {
  int id = 0;
  std::int64_t area = 0;
  double diameter = 0.0;
  bool clipped = false;
  std::size_t vertices = 0;
};

std::vector<ComponentRow> component_inventory(const ClassifiedGrid& grid, std::int64_t min_area, bool exclude_clipped);
std::string components_csv(const std::vector<ComponentRow>& rows);

/// components.csv in config.out, at config.resolution.
std::vector<ComponentRow> cmd_components(const ExperimentConfig& config);

struct CurveRecord {
  int resolution = 0;
  int id = 0;
  std::int64_t area = 0;
  double diameter = 0.0;
  double quasicircle = 0.0;
  std::size_t vertices = 0;
  std::size_t stride = 1;
};

struct LevelSummary {
  int resolution = 0;
  double bounded_fraction = 0.0;
  std::size_t components_total = 0;
  std::size_t components_retained = 0;
  SeparationMatrix separation;
  double max_quasicircle = 0.0;
  int max_quasicircle_id = -1;
};

struct MetricsReport {
  ExperimentConfig config;
  std::vector<CurveRecord> curves;
  std::vector<LevelSummary> levels;
  bool separation_stable = false;
  bool quasicircle_stable = false;
  bool quasicircle_increasing = false;

  std::string to_json() const;
  std::string curves_csv() const;
  std::string separation_csv() const;
};

/// Measures the `top` largest retained components at each ladder resolution.
MetricsReport compute_metrics(const ExperimentConfig& config);
/// Same metrics on an already classified grid (one ladder level).
LevelSummary measure_level(const ClassifiedGrid& grid, const ExperimentConfig& config,
                           std::vector<CurveRecord>& records);

/// Values within kStabilityTolerance of the value at the finest level.
bool ladder_stable(const std::vector<double>& values);
bool strictly_increasing(const std::vector<double>& values);

/// report.json, curves.csv and separation.csv in config.out.
MetricsReport cmd_metrics(const ExperimentConfig& config);

/// param_plane.ppm in config.out; the viewport is read as a lambda region.
ClassifiedGrid cmd_param_plane(const ExperimentConfig& config);

struct CommandOutput {
  std::string text;
  int exit_code = 0;
};

struct AnglesRequest {
  /// classify | inR | conj | ell | double | theta-prime | build-theta | verify-chain
  std::string command;
  /// "p/q" operand of the single-angle commands.
  std::string angle;
  /// Input bits a_1 a_2 ... for build-theta and verify-chain.
  std::string bits;
  std::size_t n_max = 50;
  std::size_t leading_run = 100;
};

/// Exit code 0 on success, 2 when verify-chain is not certified.
CommandOutput cmd_angles(const AnglesRequest& request);

}  // namespace carpet

// carpet: Julia set rendering, peripheral-circle metrics and angle
// combinatorics for McMullen maps z^d + lambda / z^d.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "carpet/error.hpp"
#include "carpet/experiments.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 3;

// Flags mirror config-file keys; flags given on the command line win.
struct ExperimentFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool exclude_clipped = true;
  CLI::Option* exclude_option = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    for (const char* key : {"out", "resolution", "max-iter", "d", "lambda-re", "lambda-im", "min-area", "max-pairs",
                            "ladder", "center-re", "center-im", "width", "height", "escape-radius", "top", "threads",
                            "boundary-width"}) {
      cmd->add_option(std::string("--") + key, values[key]);
    }
    cmd->add_flag("--supersample", values["supersample"], "2x2 supersampling");
    exclude_option = cmd->add_flag("--exclude-clipped,!--include-clipped", exclude_clipped,
                                   "drop components touching the viewport edge");
  }

  carpet::ExperimentConfig resolve(CLI::App* cmd) const {
    carpet::ExperimentConfig config;
    if (!config_path.empty()) config = carpet::load_config(config_path, config);
    for (const auto& [key, value] : values) {
      const auto* opt = cmd->get_option_no_throw("--" + key);
      if (opt && opt->count() > 0) carpet::apply_setting(config, key, key == "supersample" ? "true" : value);
    }
    if (exclude_option->count() > 0) config.exclude_clipped = exclude_clipped;
    return config;
  }
};

void print_level(const carpet::LevelSummary& level) {
  const auto& sep = level.separation;
  std::printf("resolution %d: components %zu retained %zu max_quasicircle %.6g min_delta %.6g (ids %d,%d)\n",
              level.resolution, level.components_total, level.components_retained, level.max_quasicircle,
              sep.min_delta, sep.ids[sep.min_i], sep.ids[sep.min_j]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Carpet Julia sets of McMullen maps: rendering, peripheral-circle metrics, angle combinatorics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", carpet::kVersion);

  ExperimentFlags render_flags, components_flags, metrics_flags, param_flags;
  auto* render = app.add_subcommand("render", "classify a grid and write PPM images");
  render_flags.attach(render);
  auto* components = app.add_subcommand("components", "write the escaping-component inventory as CSV");
  components_flags.attach(components);
  auto* metrics = app.add_subcommand("metrics", "quasicircle and separation report over a resolution ladder");
  metrics_flags.attach(metrics);
  auto* param = app.add_subcommand("param-plane", "render the non-escaping locus over a lambda region");
  param_flags.attach(param);

  carpet::AnglesRequest angles_req;
  auto* angles = app.add_subcommand("angles", "exact angle combinatorics under doubling and the tent map");
  angles->add_option("command", angles_req.command,
                     "classify | inR | conj | ell | double | theta-prime | build-theta | verify-chain")
      ->required();
  angles->add_option("angle", angles_req.angle, "angle as p/q");
  angles->add_option("--bits", angles_req.bits, "input bits a_1 a_2 ...");
  angles->add_option("--n-max", angles_req.n_max, "largest n in the inequality chain");
  angles->add_option("--leading-run", angles_req.leading_run, "length of the leading block of ones");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*render) {
      const auto config = render_flags.resolve(render);
      const auto result = carpet::cmd_render(config);
      std::printf("bounded fraction %.6f\n", result.grid.bounded_fraction());
      for (const auto& f : result.files) std::printf("wrote %s\n", f.string().c_str());
    } else if (*components) {
      const auto config = components_flags.resolve(components);
      const auto rows = carpet::cmd_components(config);
      std::printf("%zu components written to %s\n", rows.size(), (config.out / "components.csv").string().c_str());
    } else if (*metrics) {
      const auto config = metrics_flags.resolve(metrics);
      const auto report = carpet::cmd_metrics(config);
      for (const auto& level : report.levels) print_level(level);
      std::printf("separation stable: %s, quasicircle stable: %s, quasicircle increasing: %s\n",
                  report.separation_stable ? "yes" : "no", report.quasicircle_stable ? "yes" : "no",
                  report.quasicircle_increasing ? "yes" : "no");
    } else if (*param) {
      const auto config = param_flags.resolve(param);
      const auto grid = carpet::cmd_param_plane(config);
      std::printf("bounded fraction %.6f\nwrote %s\n", grid.bounded_fraction(),
                  (config.out / "param_plane.ppm").string().c_str());
    } else if (*angles) {
      const auto output = carpet::cmd_angles(angles_req);
      std::cout << output.text;
      return output.exit_code;
    }
  } catch (const carpet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.code() == carpet::Errc::ParseError || e.code() == carpet::Errc::InvalidArgument;
    return usage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

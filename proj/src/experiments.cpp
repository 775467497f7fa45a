#include "carpet/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "carpet/angles.hpp"
#include "carpet/error.hpp"

namespace carpet {
namespace {

using Json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  // shortest form that reads back to the same double
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json json_double(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::ParseError, "invalid value '" + s + "' for " + std::string(key));
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(Errc::ParseError, "invalid boolean '" + s + "' for " + std::string(key));
}

std::vector<int> parse_ladder(std::string_view text) {
  std::vector<int> ladder;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) ladder.push_back(parse_number<int>("ladder", item));
  return ladder;
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
}

bool by_area_then_id(const Component& a, const Component& b) {
  return a.area != b.area ? a.area > b.area : a.id < b.id;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (degree < 2) throw Error(Errc::InvalidArgument, "d must be >= 2");
  if (lambda == Complex{}) throw Error(Errc::InvalidArgument, "lambda must be nonzero");
  if (!(width > 0.0) || !(height > 0.0)) throw Error(Errc::InvalidArgument, "viewport extent must be positive");
  if (resolution < 16) throw Error(Errc::InvalidArgument, "resolution must be >= 16");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (ladder[i] < 16) throw Error(Errc::InvalidArgument, "ladder resolutions must be >= 16");
    if (i > 0 && ladder[i] <= ladder[i - 1]) throw Error(Errc::InvalidArgument, "ladder must be strictly increasing");
  }
  if (max_iter < 1) throw Error(Errc::InvalidArgument, "max-iter must be >= 1");
  if (escape_radius < 0.0) throw Error(Errc::InvalidArgument, "escape-radius must be >= 0");
  if (escape_radius > 0.0 && escape_radius < default_escape_radius(map()))
    throw Error(Errc::InvalidArgument, "escape-radius is below the certified threshold");
  if (min_area < 1) throw Error(Errc::InvalidArgument, "min-area must be >= 1");
  if (max_pairs < 1) throw Error(Errc::InvalidArgument, "max-pairs must be >= 1");
  if (boundary_width < 0.0) throw Error(Errc::InvalidArgument, "boundary-width must be >= 0");
  if (top < 2) throw Error(Errc::InvalidArgument, "top must be >= 2");
}

std::vector<int> ExperimentConfig::resolutions() const { return ladder.empty() ? std::vector<int>{resolution} : ladder; }

GridSpec ExperimentConfig::grid(int res) const {
  GridSpec g;
  g.center = center;
  g.width = width;
  g.height = height;
  g.res_x = res;
  g.res_y = res;
  g.max_iter = max_iter;
  g.escape_radius = escape_radius;
  g.supersample = supersample;
  g.boundary_width = boundary_width;
  return g;
}

MapSpec ExperimentConfig::map() const { return MapSpec::mcmullen(degree, lambda); }

void apply_setting(ExperimentConfig& c, std::string_view raw_key, std::string_view value) {
  const std::string key = trim(raw_key);
  if (key == "d") c.degree = parse_number<int>(key, value);
  else if (key == "lambda-re") c.lambda.real(parse_number<double>(key, value));
  else if (key == "lambda-im") c.lambda.imag(parse_number<double>(key, value));
  else if (key == "center-re") c.center.real(parse_number<double>(key, value));
  else if (key == "center-im") c.center.imag(parse_number<double>(key, value));
  else if (key == "width") c.width = parse_number<double>(key, value);
  else if (key == "height") c.height = parse_number<double>(key, value);
  else if (key == "resolution") c.resolution = parse_number<int>(key, value);
  else if (key == "ladder") c.ladder = parse_ladder(value);
  else if (key == "max-iter") c.max_iter = parse_number<int>(key, value);
  else if (key == "escape-radius") c.escape_radius = parse_number<double>(key, value);
  else if (key == "min-area") c.min_area = parse_number<std::int64_t>(key, value);
  else if (key == "max-pairs") c.max_pairs = parse_number<std::size_t>(key, value);
  else if (key == "exclude-clipped") c.exclude_clipped = parse_bool(key, value);
  else if (key == "top") c.top = parse_number<int>(key, value);
  else if (key == "supersample") c.supersample = parse_bool(key, value);
  else if (key == "boundary-width") c.boundary_width = parse_number<double>(key, value);
  else if (key == "threads") c.threads = parse_number<int>(key, value);
  else if (key == "out") c.out = trim(value);
  else throw Error(Errc::ParseError, "unknown setting '" + key + "'");
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ParseError, "line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw Error(Errc::ParseError, "line " + std::to_string(number) + ": empty key");
    out[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot read config " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  for (const auto& [key, value] : parse_key_values(text.str())) apply_setting(base, key, value);
  return base;
}

std::string describe_config(const ExperimentConfig& c) {
  std::string ladder;
  for (int r : c.resolutions()) ladder += (ladder.empty() ? "" : ",") + std::to_string(r);
  std::ostringstream out;
  out << "d = " << c.degree << '\n'
      << "lambda-re = " << fmt_double(c.lambda.real()) << '\n'
      << "lambda-im = " << fmt_double(c.lambda.imag()) << '\n'
      << "center-re = " << fmt_double(c.center.real()) << '\n'
      << "center-im = " << fmt_double(c.center.imag()) << '\n'
      << "width = " << fmt_double(c.width) << '\n'
      << "height = " << fmt_double(c.height) << '\n'
      << "resolution = " << c.resolution << '\n'
      << "ladder = " << ladder << '\n'
      << "max-iter = " << c.max_iter << '\n'
      << "escape-radius = " << fmt_double(c.escape_radius > 0.0 ? c.escape_radius : default_escape_radius(c.map()))
      << '\n'
      << "min-area = " << c.min_area << '\n'
      << "max-pairs = " << c.max_pairs << '\n'
      << "exclude-clipped = " << (c.exclude_clipped ? "true" : "false") << '\n'
      << "top = " << c.top << '\n'
      << "supersample = " << (c.supersample ? "true" : "false") << '\n'
      << "boundary-width = " << fmt_double(c.boundary_width) << '\n';
  return out.str();
}

std::string provenance_timestamp() {
  const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
  return (epoch && *epoch) ? std::string(epoch) : std::string("unset");
}

RenderResult cmd_render(const ExperimentConfig& config) {
  config.validate();
  ensure_directory(config.out);
  RenderResult result{classify_grid(config.map(), config.grid(config.resolution), config.threads), {}};

  const auto twotone = config.out / "julia_twotone.ppm";
  const auto escape = config.out / "julia_escape.ppm";
  const auto manifest = config.out / "manifest.txt";
  write_file(twotone, render_ppm(result.grid, Palette::TwoTone));
  write_file(escape, render_ppm(result.grid, Palette::EscapeTime));

  std::ostringstream m;
  m << "# schema: carpet.render.v1\n"
    << "version = " << kVersion << '\n'
    << "generated-at = " << provenance_timestamp() << '\n'
    << describe_config(config) << "bounded-fraction = " << fmt_double(result.grid.bounded_fraction()) << '\n'
    << "files = julia_twotone.ppm,julia_escape.ppm\n";
  write_file(manifest, m.str());
  result.files = {twotone, escape, manifest};
  return result;
}

std::vector<ComponentRow> component_inventory(const ClassifiedGrid& grid, std::int64_t min_area,
                                              bool exclude_clipped) {
  const ComponentMap cmap = label_components(grid);
  std::vector<ComponentRow> rows;
  for (const auto& comp : filter_components(cmap.components, min_area, exclude_clipped)) {
    const PeripheralCurve curve = trace_boundary(grid, cmap, comp.id);
    rows.push_back({comp.id, comp.area, diameter(curve.open_vertices()), comp.clipped, curve.open_vertices().size()});
  }
  return rows;
}

std::string components_csv(const std::vector<ComponentRow>& rows) {
  std::ostringstream out;
  out << "# schema: carpet.components.v1\n"
      << "id,area,diameter,clipped,vertices\n";
  for (const auto& r : rows)
    out << r.id << ',' << r.area << ',' << fmt_double(r.diameter) << ',' << (r.clipped ? 1 : 0) << ',' << r.vertices
        << '\n';
  return out.str();
}

std::vector<ComponentRow> cmd_components(const ExperimentConfig& config) {
  config.validate();
  ensure_directory(config.out);
  const ClassifiedGrid grid = classify_grid(config.map(), config.grid(config.resolution), config.threads);
  auto rows = component_inventory(grid, config.min_area, config.exclude_clipped);
  write_file(config.out / "components.csv", components_csv(rows));
  return rows;
}

LevelSummary measure_level(const ClassifiedGrid& grid, const ExperimentConfig& config,
                           std::vector<CurveRecord>& records) {
  const ComponentMap cmap = label_components(grid);
  auto kept = filter_components(cmap.components, config.min_area, config.exclude_clipped);
  std::sort(kept.begin(), kept.end(), by_area_then_id);
  if (kept.size() > static_cast<std::size_t>(config.top)) kept.resize(config.top);
  if (kept.size() < 2) throw Error(Errc::TooFewCurves, "fewer than two components retained");

  std::vector<PeripheralCurve> curves;
  for (const auto& comp : kept) curves.push_back(trace_boundary(grid, cmap, comp.id));

  const long count = static_cast<long>(curves.size());
  std::vector<CurveRecord> level_records(curves.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.threads > 0 ? config.threads : omp_get_max_threads())
  for (long i = 0; i < count; ++i) {
    const auto& curve = curves[i];
    CurveRecord& rec = level_records[i];
    rec.resolution = grid.spec.res_x;
    rec.id = curve.id;
    rec.area = curve.area;
    rec.vertices = curve.open_vertices().size();
    rec.diameter = diameter(curve.open_vertices());
    rec.quasicircle = std::numeric_limits<double>::quiet_NaN();
    if (!curve.clipped && rec.vertices >= 8) {
      const auto estimate = quasicircle_estimate(curve.open_vertices(), config.max_pairs);
      rec.quasicircle = estimate.constant;
      rec.stride = estimate.stride;
    }
  }

  LevelSummary level;
  level.resolution = grid.spec.res_x;
  level.bounded_fraction = grid.bounded_fraction();
  level.components_total = cmap.components.size();
  level.components_retained = curves.size();
  level.separation = separation_matrix(curves, config.threads);
  for (const auto& rec : level_records) {
    if (!std::isnan(rec.quasicircle) && rec.quasicircle > level.max_quasicircle) {
      level.max_quasicircle = rec.quasicircle;
      level.max_quasicircle_id = rec.id;
    }
  }
  records.insert(records.end(), level_records.begin(), level_records.end());
  return level;
}

bool ladder_stable(const std::vector<double>& values) {
  if (values.empty()) return false;
  const double ref = values.back();
  if (!(ref > 0.0)) return false;
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return std::abs(v - ref) <= kStabilityTolerance * ref; });
}

bool strictly_increasing(const std::vector<double>& values) {
  if (values.size() < 2) return false;
  for (std::size_t i = 1; i < values.size(); ++i)
    // rounding-level growth is not growth
    if (!(values[i] > values[i - 1] * (1.0 + kIncreaseTolerance))) return false;
  return true;
}

MetricsReport compute_metrics(const ExperimentConfig& config) {
  config.validate();
  if (config.min_area < 3) throw Error(Errc::InvalidArgument, "metrics need min-area >= 3");
  MetricsReport report;
  report.config = config;
  const MapSpec map = config.map();
  for (int res : config.resolutions()) {
    const ClassifiedGrid grid = classify_grid(map, config.grid(res), config.threads);
    report.levels.push_back(measure_level(grid, config, report.curves));
  }
  std::vector<double> deltas;
  std::vector<double> quasi;
  for (const auto& level : report.levels) {
    deltas.push_back(level.separation.min_delta);
    quasi.push_back(level.max_quasicircle);
  }
  report.separation_stable = ladder_stable(deltas);
  report.quasicircle_stable = ladder_stable(quasi);
  report.quasicircle_increasing = strictly_increasing(quasi);
  return report;
}

std::string MetricsReport::to_json() const {
  Json doc;
  doc["schema"] = "carpet.metrics.v1";
  Json settings = Json::object();
  for (const auto& [key, value] : parse_key_values(describe_config(config))) settings[key] = value;
  doc["provenance"] = {{"version", kVersion}, {"generated_at", provenance_timestamp()}, {"config", settings}};
  doc["operationalization"] =
      "empirical: quasicircle constants are polyline lower bounds over sampled vertex pairs; a ladder quantity is "
      "stable when every level lies within 25% of the finest level";

  Json levels = Json::array();
  for (const auto& level : this->levels) {
    const auto& sep = level.separation;
    levels.push_back({{"resolution", level.resolution},
                      {"bounded_fraction", level.bounded_fraction},
                      {"components_total", level.components_total},
                      {"components_retained", level.components_retained},
                      {"max_quasicircle", json_double(level.max_quasicircle)},
                      {"max_quasicircle_id", level.max_quasicircle_id},
                      {"min_delta", json_double(sep.min_delta)},
                      {"min_delta_pair", {sep.ids[sep.min_i], sep.ids[sep.min_j]}}});
  }
  doc["levels"] = levels;

  Json rows = Json::array();
  for (const auto& r : curves)
    rows.push_back({{"resolution", r.resolution},
                    {"id", r.id},
                    {"area", r.area},
                    {"diameter", r.diameter},
                    {"quasicircle", json_double(r.quasicircle)},
                    {"vertices", r.vertices},
                    {"stride", r.stride}});
  doc["curves"] = rows;
  doc["verdicts"] = {{"separation_stable", separation_stable},
                     {"quasicircle_stable", quasicircle_stable},
                     {"quasicircle_increasing", quasicircle_increasing}};
  return doc.dump(2) + "\n";
}

std::string MetricsReport::curves_csv() const {
  std::ostringstream out;
  out << "# schema: carpet.curves.v1\n"
      << "resolution,id,area,diameter,quasicircle,vertices,stride\n";
  for (const auto& r : curves)
    out << r.resolution << ',' << r.id << ',' << r.area << ',' << fmt_double(r.diameter) << ','
        << fmt_double(r.quasicircle) << ',' << r.vertices << ',' << r.stride << '\n';
  return out.str();
}

std::string MetricsReport::separation_csv() const {
  std::ostringstream out;
  out << "# schema: carpet.separation.v1\n"
      << "resolution,id_i,id_j,delta\n";
  for (const auto& level : levels) {
    const auto& sep = level.separation;
    for (std::size_t i = 0; i < sep.size(); ++i)
      for (std::size_t j = i + 1; j < sep.size(); ++j)
        out << level.resolution << ',' << sep.ids[i] << ',' << sep.ids[j] << ',' << fmt_double(sep.at(i, j)) << '\n';
  }
  return out.str();
}

MetricsReport cmd_metrics(const ExperimentConfig& config) {
  MetricsReport report = compute_metrics(config);
  ensure_directory(config.out);
  write_file(config.out / "report.json", report.to_json());
  write_file(config.out / "curves.csv", report.curves_csv());
  write_file(config.out / "separation.csv", report.separation_csv());
  return report;
}

ClassifiedGrid cmd_param_plane(const ExperimentConfig& config) {
  if (config.degree < 2) throw Error(Errc::InvalidArgument, "d must be >= 2");
  ensure_directory(config.out);
  GridSpec region = config.grid(config.resolution);
  region.escape_radius = 0.0;
  region.supersample = false;
  region.boundary_width = 0.0;
  ClassifiedGrid grid = classify_parameter_plane(config.degree, region, config.threads);
  write_file(config.out / "param_plane.ppm", render_ppm(grid, Palette::TwoTone));
  return grid;
}

CommandOutput cmd_angles(const AnglesRequest& req) {
  const std::string& cmd = req.command;
  if (cmd == "classify") return {classify_orbit(parse_angle(req.angle)).to_string() + "\n", 0};
  if (cmd == "inR") return {std::string(in_R(parse_angle(req.angle)) ? "true" : "false") + "\n", 0};
  if (cmd == "conj") return {std::string(conjugacy_check(parse_angle(req.angle)) ? "true" : "false") + "\n", 0};
  if (cmd == "ell") return {ell(parse_angle(req.angle)).to_string() + "\n", 0};
  if (cmd == "double") return {doubling(parse_angle(req.angle)).to_string() + "\n", 0};
  if (cmd == "theta-prime") return {theta_prime().to_string() + "\n", 0};
  if (cmd == "build-theta") return {build_theta(parse_bits(req.bits), req.leading_run).to_string() + "\n", 0};
  if (cmd == "verify-chain") {
    const auto cert = verify_inequalities(build_theta(parse_bits(req.bits), req.leading_run), req.n_max);
    std::string text = cert.to_string() + "\n";
    if (!cert.certified()) text += "comparison: " + cert.failing_comparison + "\n";
    return {text, cert.certified() ? 0 : 2};
  }
  throw Error(Errc::ParseError, "unknown angles subcommand '" + cmd + "'");
}

}  // namespace carpet

// starsym: symmetry analysis of star bodies from their section functions.

#include "starsym/body_spec.hpp"
#include "starsym/harmonics.hpp"
#include "starsym/run_config.hpp"
#include "starsym/slice_transforms.hpp"
#include "starsym/symmetry_detector.hpp"
#include "starsym/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace starsym;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  const fs::path path = fs::path(c.output_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpecError(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void write_json(const RunConfig& c, const std::string& name, const json& j) {
  open_output(c, name) << j.dump(2) << '\n';
}

std::string parameters_comment(const RunConfig& c) { return "# parameters: " + to_json(c).dump() + "\n"; }

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Direction section_direction(const RunConfig& c) {
  if (c.xi.empty()) return Direction(Vector::Unit(c.dim, 0));
  if (static_cast<int>(c.xi.size()) != c.dim)
    throw SpecError(fmt::format("--xi has {} components, body has dim {}", c.xi.size(), c.dim));
  return Direction(Eigen::Map<const Vector>(c.xi.data(), c.dim));
}

int cmd_analyze(RunConfig c) {
  const RadialField body = load_body_spec(c.body_spec);
  c.dim = body.dim();
  c = resolved(c);
  SweepOptions so;
  so.num_dirs = c.num_dirs;
  so.sampler = DirectionSampler{parse_sampler_kind(c.sampler), c.seed};
  so.resolution = c.resolution;
  so.frame_seed = c.seed;
  const AsymmetryReport r = detect(body, so);

  json values = json::array();
  for (std::size_t i = 0; i < r.values.size(); ++i)
    values.push_back({{"xi", vec_json(r.xis[i].coords())}, {"A", r.values[i]}});
  json report;
  report["body_id"] = r.body_id;
  report["dim"] = r.dim;
  report["verdict"] = std::string(to_string(r.verdict));
  report["summary"] = r.summary();
  report["threshold"] = r.threshold;
  report["statistics"] = {{"max_abs", r.max_abs},
                          {"l2_mean", r.l2_mean},
                          {"argmax_index", r.argmax},
                          {"argmax_xi", vec_json(r.xis[r.argmax].coords())},
                          {"argmax_value", r.values[r.argmax]},
                          {"num_dirs", r.values.size()}};
  report["ground_truth_odd_sup"] = r.ground_truth_odd_sup ? json(*r.ground_truth_odd_sup) : json(nullptr);
  report["values"] = std::move(values);
  report["parameters"] = to_json(c);
  write_json(c, "report.json", report);

  auto csv = open_output(c, "values.csv");
  csv << parameters_comment(c);
  for (int k = 0; k < c.dim; ++k) csv << "xi_" << k + 1 << ',';
  csv << "A\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    for (int k = 0; k < c.dim; ++k) csv << num(r.xis[i][k]) << ',';
    csv << num(r.values[i]) << '\n';
  }
  fmt::print("{}: {}\n", r.body_id, r.summary());
  return kExitOk;
}

struct PlottedCurve {
  std::string kind;
  std::vector<double> zs, values;
};

/// Line plot with z on the horizontal axis and section volume on the vertical.
std::string render_svg(const std::vector<PlottedCurve>& curves, const RunConfig& c) {
  constexpr double W = 640, H = 420, left = 70, right = 20, top = 30, bottom = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  double zmin = 1, zmax = -1, vmax = 0;
  for (const auto& cv : curves) {
    for (double z : cv.zs) zmin = std::min(zmin, z), zmax = std::max(zmax, z);
    for (double v : cv.values) vmax = std::max(vmax, v);
  }
  if (zmax <= zmin) zmin -= 0.5, zmax += 0.5;
  if (vmax <= 0) vmax = 1;
  vmax *= 1.05;
  auto px = [&](double z) { return left + (z - zmin) / (zmax - zmin) * (W - left - right); };
  auto py = [&](double v) { return H - bottom - v / vmax * (H - top - bottom); };

  std::string escaped;
  for (char ch : to_json(c).dump()) {
    switch (ch) {
      case '&': escaped += "&amp;"; break;
      case '<': escaped += "&lt;"; break;
      case '>': escaped += "&gt;"; break;
      default: escaped += ch;
    }
  }
  std::string s = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<metadata>{2}</metadata>\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      W, H, escaped);
  const double x0 = left, x1 = W - right, y0 = H - bottom, y1 = top;
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x1, y0);
  s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x0, y1);
  for (int t = 0; t <= 4; ++t) {
    const double z = zmin + (zmax - zmin) * t / 4, v = vmax * t / 4;
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.2f}</text>\n", px(z),
                     y0 + 16, z);
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n", x0 - 6,
                     py(v) + 4, v);
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">z</text>\n",
                   (x0 + x1) / 2, H - 20);
  s += fmt::format(
      "<text x=\"18\" y=\"{0:.2f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">"
      "volume</text>\n",
      (y0 + y1) / 2);
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* color = colors[k % 4];
    s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
    for (std::size_t i = 0; i < curves[k].zs.size(); ++i)
      s += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(curves[k].zs[i]), py(curves[k].values[i]));
    s += "\"/>\n";
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">{}</text>\n", x1 - 110,
                     top + 16 * (k + 1), color, curves[k].kind);
  }
  s += "</svg>\n";
  return s;
}

int cmd_sections(RunConfig c) {
  const RadialField body = load_body_spec(c.body_spec);
  c.dim = body.dim();
  c = resolved(c);
  const std::vector<double> zs = parse_z_grid(c.z_grid);
  for (const auto& f : c.formats)
    if (f != "csv" && f != "json" && f != "svg") throw SpecError(fmt::format("unknown format '{}'", f));
  if (!(c.fd_step > 0.0 && c.fd_step < 0.5)) throw SpecError("--fd-step must lie in (0, 0.5)");
  const Direction xi = section_direction(c);
  const EquatorFrame frame = make_frame(xi, c.seed);
  const EquatorQuadrature rule = equator_rule(c.dim, c.resolution);

  std::vector<PlottedCurve> curves;
  std::vector<double> slopes;
  for (const std::string& name : c.kinds) {
    CurveKind kind;
    try {
      kind = parse_curve_kind(name);
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
    std::vector<double> kept = zs;
    if (kind == CurveKind::hyperplane) {
      // Hyperplane sections are parametrized about the foot point z*xi,
      // which must lie inside the body.
      std::erase_if(kept, [&](double z) {
        const bool outside = std::abs(z) >= body(z < 0 ? (-xi).coords() : xi.coords());
        if (outside) fmt::print(stderr, "starsym: hyperplane z = {} skipped (foot point outside the body)\n", z);
        return outside;
      });
    }
    const SectionCurve sc = section_curve(kind, body, frame, kept, rule);
    curves.push_back({std::string(to_string(kind)), sc.zs, sc.values});
    slopes.push_back(derivative_at_zero(kind, body, frame, rule, FdOptions{c.fd_step, 4}).fd_value);
  }

  auto has = [&](const char* f) { return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end(); };
  if (has("csv")) {
    auto csv = open_output(c, "curves.csv");
    csv << parameters_comment(c) << "kind,z,value,slope_at_zero\n";
    for (std::size_t k = 0; k < curves.size(); ++k)
      for (std::size_t i = 0; i < curves[k].zs.size(); ++i)
        csv << curves[k].kind << ',' << num(curves[k].zs[i]) << ',' << num(curves[k].values[i]) << ','
            << num(slopes[k]) << '\n';
  }
  if (has("json")) {
    json out;
    out["parameters"] = to_json(c);
    out["xi"] = vec_json(xi.coords());
    json arr = json::array();
    for (std::size_t k = 0; k < curves.size(); ++k)
      arr.push_back({{"kind", curves[k].kind},
                     {"z", curves[k].zs},
                     {"value", curves[k].values},
                     {"slope_at_zero", slopes[k]}});
    out["curves"] = std::move(arr);
    write_json(c, "curves.json", out);
  }
  if (has("svg")) open_output(c, "curves.svg") << render_svg(curves, c);
  return kExitOk;
}

int cmd_verify(RunConfig c) {
  VerifyOptions vo;
  if (c.resolution != 0) vo.resolution = c.resolution;
  c.resolution = vo.resolution;
  vo.seed = c.seed;
  vo.only = c.only;
  vo.oracle_samples = c.oracle_samples;
  if (vo.resolution < 2) throw SpecError("--resolution must be at least 2");
  if (vo.only) {
    const auto& names = verify_check_names();
    if (std::find(names.begin(), names.end(), *vo.only) == names.end())
      throw SpecError(fmt::format("unknown check '{}' (available: {})", *vo.only, fmt::join(names, ", ")));
  }
  const std::vector<CheckResult> results = run_verification(vo);
  bool all = true;
  json checks = json::array();
  for (const CheckResult& r : results) {
    all = all && r.pass;
    checks.push_back({{"name", r.name},
                      {"description", r.description},
                      {"residual", std::isfinite(r.residual) ? json(r.residual) : json(nullptr)},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"detail", r.detail}});
    fmt::print("{:<20} {}  residual {:.3e}  tolerance {:.1e}{}\n", r.name, r.pass ? "PASS" : "FAIL", r.residual,
               r.tolerance, r.detail.empty() ? "" : "  (" + r.detail + ")");
  }
  write_json(c, "verify.json", {{"all_pass", all}, {"checks", std::move(checks)}, {"parameters", to_json(c)}});
  return all ? kExitOk : kExitFailed;
}

int cmd_harmonics(RunConfig c) {
  if (c.dim != 2 && c.dim != 3)
    throw SpecError(fmt::format("dimension {} unsupported for harmonic decomposition", c.dim));
  c = resolved(c);
  MultiplierOptions mo;
  mo.num_xi = c.num_dirs;
  mo.resolution = c.resolution;
  mo.seed = c.seed;
  MultiplierTable table;
  try {
    table = multiplier_table(c.dim, c.lmax, mo);
  } catch (const HarmonicsError& e) {
    throw SpecError(e.what());
  }
  auto csv = open_output(c, "multipliers.csv");
  csv << parameters_comment(c) << "degree,order,lambda,residual\n";
  for (const Multiplier& m : table.rows)
    csv << m.degree << ',' << m.order << ',' << num(m.lambda) << ',' << num(m.residual) << '\n';
  return kExitOk;
}

/// Registers `--name` on `cmd`; the parsed value is copied into the config
/// only when given, so command-line flags override a --config file.
template <class T>
CLI::Option* bind_option(CLI::App* cmd, std::vector<std::function<void(RunConfig&)>>& apply, const std::string& flags,
                  T RunConfig::*field, const std::string& help) {
  auto value = std::make_shared<T>(RunConfig{}.*field);
  CLI::Option* opt = cmd->add_option(flags, *value, help)->capture_default_str();
  apply.push_back([value, field, opt](RunConfig& c) {
    if (opt->count() > 0) c.*field = *value;
  });
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects asymmetry of star bodies through the slope of their section functions at z = 0."};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration; explicit flags take precedence");

  std::vector<std::function<void(RunConfig&)>> apply;
  std::optional<std::string> only_value;

  CLI::App* analyze = app.add_subcommand("analyze", "sweep the equator transform and report a symmetry verdict");
  bind_option(analyze, apply, "--body", &RunConfig::body_spec, "body spec JSON file");
  bind_option(analyze, apply, "--dirs", &RunConfig::num_dirs, "number of sampled directions")->check(CLI::Range(2, 1000000));
  bind_option(analyze, apply, "--resolution", &RunConfig::resolution, "equator resolution (0 = default)")
      ->check(CLI::Range(0, 1 << 20));
  bind_option(analyze, apply, "--seed", &RunConfig::seed, "random seed");
  bind_option(analyze, apply, "--sampler", &RunConfig::sampler, "fibonacci | random | antipodal")
      ->check(CLI::IsMember({"fibonacci", "random", "antipodal", "antipodal_paired"}));
  bind_option(analyze, apply, "--out", &RunConfig::output_dir, "output directory");

  CLI::App* sections = app.add_subcommand("sections", "tabulate section functions of a body");
  bind_option(sections, apply, "--body", &RunConfig::body_spec, "body spec JSON file");
  bind_option(sections, apply, "--kind", &RunConfig::kinds, "conical,hyperplane,slice_integral")->delimiter(',');
  bind_option(sections, apply, "--z", &RunConfig::z_grid, "start:stop:step or comma-separated list in (-1, 1)");
  bind_option(sections, apply, "--formats", &RunConfig::formats, "csv,json,svg")->delimiter(',');
  bind_option(sections, apply, "--xi", &RunConfig::xi, "section direction (default e1)")->delimiter(',');
  bind_option(sections, apply, "--resolution", &RunConfig::resolution, "equator resolution (0 = default)")
      ->check(CLI::Range(0, 1 << 20));
  bind_option(sections, apply, "--fd-step", &RunConfig::fd_step, "initial finite-difference step for slopes");
  bind_option(sections, apply, "--seed", &RunConfig::seed, "frame seed");
  bind_option(sections, apply, "--out", &RunConfig::output_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify", "run the identity suite");
  CLI::Option* only_opt = verify->add_option("--only", only_value, "run a single named check");
  apply.push_back([&](RunConfig& c) {
    if (only_opt->count() > 0) c.only = only_value;
  });
  bind_option(verify, apply, "--resolution", &RunConfig::resolution, "equator resolution for n = 3 (default 512)")
      ->check(CLI::Range(0, 1 << 20));
  bind_option(verify, apply, "--seed", &RunConfig::seed, "random seed");
  bind_option(verify, apply, "--samples", &RunConfig::oracle_samples, "Monte Carlo samples per oracle estimate")
      ->check(CLI::Range(10000, 1000000000));
  bind_option(verify, apply, "--out", &RunConfig::output_dir, "output directory");

  CLI::App* harmonics = app.add_subcommand("harmonics", "tabulate the multipliers of the equator transform");
  bind_option(harmonics, apply, "--dim", &RunConfig::dim, "ambient dimension (2 or 3)");
  bind_option(harmonics, apply, "--lmax", &RunConfig::lmax, "largest degree")->check(CLI::Range(0, 1000));
  bind_option(harmonics, apply, "--dirs", &RunConfig::num_dirs, "random directions per fit")->check(CLI::Range(2, 100000));
  bind_option(harmonics, apply, "--resolution", &RunConfig::resolution, "equator resolution (0 = default)")
      ->check(CLI::Range(0, 1 << 20));
  bind_option(harmonics, apply, "--seed", &RunConfig::seed, "random seed");
  bind_option(harmonics, apply, "--out", &RunConfig::output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw SpecError(fmt::format("cannot open config '{}'", config_path));
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw SpecError(fmt::format("config '{}' is not valid JSON: {}", config_path, e.what()));
      }
      config = config_from_json(j);
    }
    for (auto& fn : apply) fn(config);

    if (*analyze) config.command = Command::analyze;
    if (*sections) config.command = Command::sections;
    if (*verify) config.command = Command::verify;
    if (*harmonics) config.command = Command::harmonics;

    if ((config.command == Command::analyze || config.command == Command::sections) && config.body_spec.empty())
      throw SpecError("--body is required");
    switch (config.command) {
      case Command::analyze: return cmd_analyze(config);
      case Command::sections: return cmd_sections(config);
      case Command::verify: return cmd_verify(config);
      case Command::harmonics: return cmd_harmonics(config);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "starsym: {}\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

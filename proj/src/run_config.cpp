#include "starsym/run_config.hpp"

#include "starsym/body_spec.hpp"
#include "starsym/sphere_geom.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace starsym {

using nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::sections: return "sections";
    case Command::verify: return "verify";
    case Command::harmonics: return "harmonics";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  if (name == "analyze") return Command::analyze;
  if (name == "sections") return Command::sections;
  if (name == "verify") return Command::verify;
  if (name == "harmonics") return Command::harmonics;
  throw SpecError(fmt::format("unknown command '{}'", name));
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["body_spec"] = c.body_spec;
  j["dim"] = c.dim;
  j["resolution"] = c.resolution;
  j["num_dirs"] = c.num_dirs;
  j["seed"] = c.seed;
  j["sampler"] = c.sampler;
  j["fd_step"] = c.fd_step;
  j["z_grid"] = c.z_grid;
  j["kinds"] = c.kinds;
  j["xi"] = c.xi;
  j["output_dir"] = c.output_dir;
  j["formats"] = c.formats;
  j["only"] = c.only ? json(*c.only) : json(nullptr);
  j["lmax"] = c.lmax;
  j["oracle_samples"] = c.oracle_samples;
  return j;
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(fmt::format("config: field '{}' has the wrong type", key));
  }
}

}  // namespace

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw SpecError("config: top level must be a JSON object");
  static constexpr std::array<std::string_view, 16> known = {
      "command", "body_spec", "dim",    "resolution", "num_dirs", "seed", "sampler", "fd_step",       "z_grid",
      "kinds",   "xi",        "output_dir", "formats", "only",     "lmax", "oracle_samples"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw SpecError(fmt::format("config: unknown field '{}'", key));
  RunConfig c;
  if (j.contains("command")) {
    if (!j.at("command").is_string()) throw SpecError("config: field 'command' must be a string");
    c.command = parse_command(j.at("command").get<std::string>());
  }
  read(j, "body_spec", c.body_spec);
  read(j, "dim", c.dim);
  read(j, "resolution", c.resolution);
  read(j, "num_dirs", c.num_dirs);
  read(j, "seed", c.seed);
  read(j, "sampler", c.sampler);
  read(j, "fd_step", c.fd_step);
  read(j, "z_grid", c.z_grid);
  read(j, "kinds", c.kinds);
  read(j, "xi", c.xi);
  read(j, "output_dir", c.output_dir);
  read(j, "formats", c.formats);
  if (j.contains("only") && !j.at("only").is_null()) {
    std::string only;
    read(j, "only", only);
    c.only = only;
  }
  read(j, "lmax", c.lmax);
  read(j, "oracle_samples", c.oracle_samples);
  return c;
}

RunConfig resolved(RunConfig config) {
  if (config.resolution == 0) config.resolution = default_resolution(config.dim);
  return config;
}

namespace {

double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw SpecError(fmt::format("z grid: '{}' is not a number", s));
  return v;
}

}  // namespace

std::vector<double> parse_z_grid(std::string_view text) {
  std::vector<double> zs;
  if (text.find(':') != std::string_view::npos) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string_view::npos) throw SpecError("z grid: expected start:stop:step");
    const double a = parse_double(text.substr(0, p1));
    const double b = parse_double(text.substr(p1 + 1, p2 - p1 - 1));
    const double step = parse_double(text.substr(p2 + 1));
    if (!(step > 0.0) || !(b >= a)) throw SpecError("z grid: need stop >= start and step > 0");
    const long count = std::lround(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw SpecError("z grid: too many points");
    for (long i = 0; i < count; ++i) {
      double z = a + i * step;
      if (std::abs(z) < 1e-12 * step) z = 0.0;
      zs.push_back(z);
    }
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      zs.push_back(parse_double(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (!(std::abs(zs[i]) < 1.0)) throw SpecError(fmt::format("z grid: value {} outside (-1, 1)", zs[i]));
    if (i > 0 && !(zs[i] > zs[i - 1])) throw SpecError("z grid: values must be strictly increasing");
  }
  return zs;
}

}  // namespace starsym

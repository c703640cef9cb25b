#pragma once

// Shared helpers for the test binaries. Everything here is written
// independently of the library so it can serve as an oracle.

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testing {

inline constexpr double kPi = std::numbers::pi;

/// Uniform point on S^{n-1} from an isotropic Gaussian (std library only).
inline Eigen::VectorXd random_unit(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = g(gen);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int count, std::vector<double>& x, std::vector<double>& w) {
  x.assign(count, 0.0);
  w.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

/// Integral over S^2 by Gauss-Legendre in cos(theta) times the trapezoid rule
/// in phi; exact for polynomials of degree < min(2 * polar, azimuth).
template <class F>
double integrate_s2(F&& f, int polar = 24, int azimuth = 48) {
  std::vector<double> x, w;
  gauss_legendre(polar, x, w);
  double sum = 0.0;
  for (int i = 0; i < polar; ++i) {
    const double s = std::sqrt(1.0 - x[i] * x[i]);
    for (int j = 0; j < azimuth; ++j) {
      const double phi = 2.0 * kPi * j / azimuth;
      sum += w[i] * (2.0 * kPi / azimuth) * f(Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), x[i]));
    }
  }
  return sum;
}

/// Legendre polynomial P_l and its derivative at t (three-term recurrence).
inline std::pair<double, double> legendre(int l, double t) {
  double p0 = 1.0, p1 = t, d0 = 0.0, d1 = 1.0;
  if (l == 0) return {1.0, 0.0};
  for (int k = 2; k <= l; ++k) {
    const double p2 = ((2.0 * k - 1) * t * p1 - (k - 1.0) * p0) / k;
    const double d2 = d0 + (2.0 * k - 1) * p1;
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
  }
  return {p1, d1};
}

/// Integral of prod x_i^{2 a_i} over S^{d}, d + 1 = a.size().
inline double sphere_even_moment(const std::vector<int>& a) {
  double num = 2.0;
  double total = 0.0;
  for (int ai : a) {
    num *= std::tgamma(ai + 0.5);
    total += ai + 0.5;
  }
  return num / std::tgamma(total);
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("starsym_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

/// Runs a shell command, capturing stdout, stderr and the exit code.
inline RunResult run(const std::string& command, const std::filesystem::path& scratch) {
  const auto out = scratch / "stdout.txt";
  const auto err = scratch / "stderr.txt";
  const std::string full = command + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(full.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, read_file(out), read_file(err)};
}

/// Minimal XML well-formedness check: balanced, properly nested tags, quoted
/// attributes, no stray '<' or '&'. Enough to reject truncated or garbled output.
inline bool well_formed_xml(const std::string& s, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool seen_root = false;
  while (i < s.size()) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i);
      const std::string ent = semi == std::string::npos ? "" : s.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;")
        return fail("bad entity at " + std::to_string(i));
      i = semi + 1;
      continue;
    }
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return fail("text outside root");
      ++i;
      continue;
    }
    if (s.compare(i, 5, "<?xml") == 0) {
      const auto end = s.find("?>", i);
      if (end == std::string::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    if (s.compare(i, 4, "<!--") == 0) {
      const auto end = s.find("-->", i + 4);
      if (end == std::string::npos) return fail("unterminated comment");
      if (s.substr(i + 4, end - i - 4).find("--") != std::string::npos) return fail("'--' inside comment");
      i = end + 3;
      continue;
    }
    const auto end = s.find('>', i);
    if (end == std::string::npos) return fail("unterminated tag");
    std::string tag = s.substr(i + 1, end - i - 1);
    i = end + 1;
    if (!tag.empty() && tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
      continue;
    }
    const bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.pop_back();
    const auto sp = tag.find_first_of(" \t\n");
    const std::string name = tag.substr(0, sp);
    if (name.empty()) return fail("empty tag name");
    // Attributes: name="value" pairs.
    std::string attrs = sp == std::string::npos ? "" : tag.substr(sp);
    std::size_t k = 0;
    while (k < attrs.size()) {
      if (std::isspace(static_cast<unsigned char>(attrs[k]))) {
        ++k;
        continue;
      }
      const auto eq = attrs.find('=', k);
      if (eq == std::string::npos || eq + 1 >= attrs.size() || attrs[eq + 1] != '"')
        return fail("bad attribute in <" + name + ">");
      const auto close = attrs.find('"', eq + 2);
      if (close == std::string::npos) return fail("unterminated attribute in <" + name + ">");
      if (attrs.substr(eq + 2, close - eq - 2).find('<') != std::string::npos) return fail("'<' in attribute");
      k = close + 1;
    }
    if (stack.empty()) {
      if (seen_root) return fail("second root element");
      seen_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (!seen_root) return fail("no root element");
  return true;
}

}  // namespace testing

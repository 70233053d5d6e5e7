#pragma once

// Preceding-traffic speed profiles: CSV ingestion (EPA-style schedules and
// user traces) and preview windows for the receding-horizon controllers.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tacf/core.hpp"

namespace tacf {

/// Malformed cycle file. `line` is 1-based; 0 means "not line-specific".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? msg + " (line " + std::to_string(line) + ")"
                                : msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A 1 Hz longitudinal speed profile, immutable after load.
struct DriveCycle {
  std::string name;
  std::vector<double> speeds;  // m/s, one sample per second

  std::size_t length() const { return speeds.size(); }
  double duration_s(double dt = 1.0) const {
    return static_cast<double>(speeds.size()) * dt;
  }
  double max_speed() const {
    return speeds.empty() ? 0.0
                          : *std::max_element(speeds.begin(), speeds.end());
  }
};

namespace detail {

constexpr double kMphToMps = 0.44704;

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& tok, std::size_t line,
                           const char* what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size() || !std::isfinite(v))
      throw ParseError(std::string("invalid ") + what + " '" + tok + "'",
                       line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(std::string("invalid ") + what + " '" + tok + "'", line);
  }
}

}  // namespace detail

/// Load a two-column CSV speed trace. The header must be
/// `time_s,speed_mph` or `time_s,speed_mps`; samples are resampled onto
/// integer seconds by linear interpolation when timestamps are irregular.
inline DriveCycle load_cycle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open cycle file '" + path + "'");

  std::string header;
  if (!std::getline(in, header))
    throw ParseError("empty cycle file '" + path + "'", 1);
  header = detail::trim(header);

  double unit = 0.0;
  if (header == "time_s,speed_mph")
    unit = detail::kMphToMps;
  else if (header == "time_s,speed_mps")
    unit = 1.0;
  else
    throw ParseError("unknown header '" + header +
                         "'; expected time_s,speed_mph or time_s,speed_mps",
                     1);

  std::vector<double> times, raw;
  std::string row;
  std::size_t lineno = 1;
  while (std::getline(in, row)) {
    ++lineno;
    row = detail::trim(row);
    if (row.empty()) continue;
    auto comma = row.find(',');
    if (comma == std::string::npos)
      throw ParseError("expected 'time,speed'", lineno);
    double t = detail::parse_number(detail::trim(row.substr(0, comma)), lineno,
                                    "time");
    double v = detail::parse_number(detail::trim(row.substr(comma + 1)),
                                    lineno, "speed");
    if (v < 0.0) throw ParseError("negative speed", lineno);
    if (!times.empty() && t <= times.back())
      throw ParseError("non-increasing timestamp", lineno);
    times.push_back(t);
    raw.push_back(v * unit);
  }
  if (times.empty()) throw ParseError("cycle file has no samples", lineno);

  // Resample onto integer seconds spanning the recorded interval. Samples
  // that already sit on the grid are passed through bit-exactly.
  DriveCycle c;
  c.name = std::filesystem::path(path).stem().string();
  const long t0 = static_cast<long>(std::ceil(times.front()));
  const long t1 = static_cast<long>(std::floor(times.back()));
  if (t1 < t0 || (times.size() == 1 && t0 != t1))
    throw ParseError("cycle covers less than one whole second");
  std::size_t seg = 0;
  for (long t = t0; t <= t1; ++t) {
    if (times.size() == 1) {
      c.speeds.push_back(raw[0]);
      continue;
    }
    while (times[seg + 1] < static_cast<double>(t) && seg + 2 < times.size())
      ++seg;
    const double ta = times[seg], tb = times[seg + 1];
    const double x =
        std::clamp((static_cast<double>(t) - ta) / (tb - ta), 0.0, 1.0);
    if (x == 0.0)
      c.speeds.push_back(raw[seg]);
    else if (x == 1.0)
      c.speeds.push_back(raw[seg + 1]);
    else
      c.speeds.push_back(raw[seg] + (raw[seg + 1] - raw[seg]) * x);
  }
  return c;
}

/// Directory holding the bundled cycle presets. The TACF_DATA_DIR
/// environment variable overrides the build-time default.
inline std::string data_dir() {
  if (const char* env = std::getenv("TACF_DATA_DIR")) return env;
#ifdef TACF_DATA_DIR
  return TACF_DATA_DIR;
#else
  return "data";
#endif
}

/// Resolve `source` as a file path first, then as a bundled preset name
/// (e.g. "us06", "nycc").
inline DriveCycle resolve_cycle(const std::string& source) {
  namespace fs = std::filesystem;
  if (fs::exists(source)) return load_cycle(source);
  const fs::path preset = fs::path(data_dir()) / (source + ".csv");
  if (fs::exists(preset)) return load_cycle(preset.string());
  throw ParseError("cycle '" + source +
                   "' is neither a file nor a bundled preset");
}

/// Speeds at steps t+1..t+N. Past the end of the cycle the final speed is
/// held, which keeps the receding-horizon problem defined through the last
/// simulated step.
inline std::vector<double> preview(const DriveCycle& c, std::size_t t, int n) {
  detail::require(t < c.length(), "preview: step index outside cycle");
  detail::require(n >= 1, "preview: horizon must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const std::size_t idx = t + static_cast<std::size_t>(k);
    out.push_back(idx < c.length() ? c.speeds[idx] : c.speeds.back());
  }
  return out;
}

}  // namespace tacf

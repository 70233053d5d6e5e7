#pragma once

// Small file-output helpers shared by the logging and experiment layers.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tacf {

/// Format a double with enough digits to round-trip exactly. Used for every
/// number we persist so that identical runs produce identical bytes.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Shorter form for human-facing tables (still deterministic).
inline std::string fmt_double(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

/// Write a file atomically: the content lands under a temporary name in the
/// same directory and is renamed into place, so interrupted batches never
/// leave truncated files behind.
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.parent_path().empty() ? fs::path(".")
                                                  : path.parent_path();
  fs::create_directories(dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open '" + tmp.string() +
                               "' for writing");
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

}  // namespace tacf

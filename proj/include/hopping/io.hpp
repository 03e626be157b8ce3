#pragma once

// Output formatting shared by the library and the CLI: 17-significant-digit
// numbers, CSV point clouds, atomic file writes and run manifests.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hopping/linalg.hpp"
#include "hopping/spectra.hpp"

namespace hop {

/// printf("%.17g"), which round-trips every finite double.
std::string fmt17(double v);

/// JSON string literal with escapes.
std::string json_quote(std::string_view s);
/// "[re, im]" with 17 significant digits.
std::string json_complex(cplx z);

/// Writes to a temporary file in the same directory, then renames over path.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

/// SHA-1 of "blob <size>\0" + content, as git computes object ids.
std::string git_blob_sha1(std::string_view content);

/// "re,im" header, one point per line, sorted by (Re, Im).
std::string cloud_csv(const PointCloud& cloud);

/// Accumulates the fields of a run manifest and renders it as JSON.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}
  /// Values are raw JSON fragments (use fmt17 / json_quote).
  void param(std::string key, std::string json_value);
  void tolerance(std::string key, double value);
  void seed(std::string key, unsigned long long value);
  void output(std::string path, std::string_view content);
  void note(std::string key, std::string json_value);
  void set_threads(unsigned t) { threads_ = t; }
  void set_wall_time(double seconds) { wall_ = seconds; }
  std::string json() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> params_, tolerances_, seeds_, outputs_, notes_;
  unsigned threads_ = 1;
  double wall_ = 0.0;
};

}  // namespace hop

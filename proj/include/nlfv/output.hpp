#pragma once

#include "nlfv/diagnostics.hpp"
#include "nlfv/grid.hpp"
#include "nlfv/harness.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nlfv {

/// CSV `x,u`, one row per cell centre.
std::string csv_1d(const Field1D& f, const Grid1D& g);
/// CSV `x,y,u`, x varying fastest.
std::string csv_2d(const Field2D& f, const Grid2D& g);
/// CSV `dx,l1_distance,alpha`; alpha is empty on the last row.
std::string csv_convergence(const ConvergenceTable& t);
std::string csv_eta_sweep(const std::vector<EtaSweepRow>& rows);

/// Binary 8-bit PGM (P5): one pixel per cell, top row is the largest y, and u
/// is mapped linearly from [0, max(1, max u)] onto grey levels 255 .. 0.
std::string pgm_heatmap(const Field2D& f);

/// Line plot of one or more 1D profiles over cell centres.
std::string svg_profiles(const std::vector<std::pair<std::string, const Field1D*>>& curves,
                         const Grid1D& g, const std::string& title);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Output directory plus the run manifest: resolved config, tool version,
/// per-phase wall time and a digest for every file written through it.
class OutputSet {
 public:
  OutputSet(std::string dir, std::string command, std::string config_json);

  /// Writes `bytes` to dir/name and records it; returns the full path.
  std::string write(const std::string& name, const std::string& bytes);
  void phase(const std::string& name, double seconds);
  void note(const std::string& key, const std::string& value);
  /// Writes dir/<stem>manifest.json (not listed in itself).
  std::string finish(const std::string& stem);

  const std::string& dir() const { return dir_; }

 private:
  struct Entry {
    std::string name;
    std::size_t bytes;
    std::string sha256;
  };
  std::string dir_;
  std::string command_;
  std::string config_json_;
  std::vector<Entry> files_;
  std::vector<std::pair<std::string, double>> phases_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

extern const char* const kVersion;

}  // namespace nlfv

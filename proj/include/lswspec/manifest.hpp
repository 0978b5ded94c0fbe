#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lswspec {

//! Everything a run needs, written next to the outputs so any run can be
//! reproduced from its manifest alone.
struct RunManifest {
  std::string command;      // simulate | estimate | montecarlo | identities
  std::string spec_path;
  std::string input_path;   // estimate: series CSV
  std::string output_dir;
  std::uint64_t seed = 0;
  long t = 1000;
  long replications = 100;
  std::vector<int> scales{-1};   // estimation scales (paper numbering)
  long points = 39;              // estimation grid size
  double eta_scale = -1.0;       // <0: library default
  double k_t = -1.0;
  long delta_points = 8;
  double grid_ratio = 1.4;
  double c2 = -1.0;
  long m_t = 2;
  long window_len = 9;
  std::string variance_mode = "plugin";  // or "exact"
  int threads = 1;
  long max_depth = 10;           // identities: deepest scale checked
  bool dump_periodogram = false;
  std::string inject_fault;      // identities test hook

  void write(const std::string& path) const;
  static RunManifest read(const std::string& path);
};

} // namespace lswspec

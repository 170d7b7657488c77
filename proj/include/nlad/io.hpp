#pragma once

// CSV and binary checkpoint output.

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nlad/continuation.hpp"
#include "nlad/state_grid.hpp"

namespace nlad {

#ifndef NLAD_VERSION
#define NLAD_VERSION "0.0.0"
#endif

inline constexpr const char* kVersion = NLAD_VERSION;

using Header = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits: enough to round-trip a double.
std::string fmt17(double v);
/// 6 significant digits for summaries.
std::string fmt6(double v);

/// "# key = value" lines followed by the version line.
void write_header(std::ostream& os, const Header& h);

void write_state_csv(std::ostream& os, const StateGrid& s);
void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& amplitude);
void write_diagram_csv(std::ostream& os, const std::vector<BranchPoint>& points, Direction d,
                       bool write_columns = true);

struct Checkpoint {
  StateGrid state;
  double gamma = 0;
  double u1_bar = 0;
  double u2_bar = 0;
  double t = 0;
};

/// Header: n as int64, then L, gamma, u1_bar, u2_bar, t as float64; then u1 and
/// u2 as n float64 each. Everything little-endian.
void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace nlad

#pragma once

// CSV serialization of trajectory logs.
//
// Layout: comment lines "# system=", "# goal=", "# dt=", then a header row
//   t, x1..xn, u1..um, h_1..h_N, sigma, gate_or_psi, correction_norm, tracking_err
// and one row per logged step. Values use 17 significant digits so a log
// read back is bit-identical; tracking_err is blank when not applicable.

#include "smoothsafe/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace smoothsafe {

std::string format_double(double v);

std::vector<std::string> csv_columns(const TrajectoryLog& log);

void write_csv(std::ostream& os, const TrajectoryLog& log);
std::string to_csv(const TrajectoryLog& log);
TrajectoryLog read_csv(std::istream& is);
TrajectoryLog read_csv_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the destination.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace smoothsafe

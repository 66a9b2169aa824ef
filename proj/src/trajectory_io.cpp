#include "smoothsafe/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smoothsafe {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("bad number in CSV: '" + s + "'");
  return v;
}

std::size_t count_prefix(const std::vector<std::string>& cols, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& c : cols)
    if (c.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> csv_columns(const TrajectoryLog& log) {
  std::vector<std::string> cols{"t"};
  const auto n = log.x.empty() ? 0 : log.x.front().size();
  const auto m = log.u.empty() ? 0 : log.u.front().size();
  const auto nh = log.h.empty() ? 0 : log.h.front().size();
  for (Eigen::Index i = 0; i < n; ++i) cols.push_back("x" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < m; ++i) cols.push_back("u" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nh; ++i) cols.push_back("h_" + std::to_string(i + 1));
  for (const char* c : {"sigma", "gate_or_psi", "correction_norm", "tracking_err"}) cols.emplace_back(c);
  return cols;
}

void write_csv(std::ostream& os, const TrajectoryLog& log) {
  os << "# system=" << to_string(log.system) << '\n';
  os << "# goal=";
  for (Eigen::Index i = 0; i < log.goal.size(); ++i) os << (i ? "," : "") << format_double(log.goal[i]);
  os << '\n' << "# dt=" << format_double(log.dt) << '\n';
  const auto cols = csv_columns(log);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (std::size_t k = 0; k < log.size(); ++k) {
    os << format_double(log.t[k]);
    for (double v : log.x[k]) os << ',' << format_double(v);
    for (double v : log.u[k]) os << ',' << format_double(v);
    for (double v : log.h[k]) os << ',' << format_double(v);
    os << ',' << format_double(log.sigma[k]) << ',' << format_double(log.gate_or_psi[k]) << ','
       << format_double(log.correction_norm[k]) << ',' << format_double(log.tracking_err[k]) << '\n';
  }
}

std::string to_csv(const TrajectoryLog& log) {
  std::ostringstream os;
  write_csv(os, log);
  return os.str();
}

TrajectoryLog read_csv(std::istream& is) {
  TrajectoryLog log;
  std::string line;
  std::vector<std::string> cols;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "system") {
        log.system = parse_system_kind(value);
      } else if (key == "goal") {
        const auto parts = split(value, ',');
        log.goal.resize(static_cast<Eigen::Index>(parts.size()));
        for (std::size_t i = 0; i < parts.size(); ++i) log.goal[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
      } else if (key == "dt") {
        log.dt = parse_double(value);
      }
      continue;
    }
    cols = split(line, ',');
    break;
  }
  if (cols.empty() || cols.front() != "t") throw std::runtime_error("CSV header row missing");
  const auto n = static_cast<Eigen::Index>(count_prefix(cols, "x"));
  const auto m = static_cast<Eigen::Index>(count_prefix(cols, "u"));
  const std::size_t nh = count_prefix(cols, "h_");
  const std::size_t expected = 1 + static_cast<std::size_t>(n + m) + nh + 4;
  if (cols.size() != expected) throw std::runtime_error("CSV header has unexpected columns");

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != expected) throw std::runtime_error("CSV row has " + std::to_string(cells.size()) + " cells");
    std::size_t c = 0;
    log.t.push_back(parse_double(cells[c++]));
    StateVec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = parse_double(cells[c++]);
    ControlVec u(m);
    for (Eigen::Index i = 0; i < m; ++i) u[i] = parse_double(cells[c++]);
    std::vector<double> h(nh);
    for (auto& v : h) v = parse_double(cells[c++]);
    log.x.push_back(std::move(x));
    log.u.push_back(std::move(u));
    log.h.push_back(std::move(h));
    log.sigma.push_back(parse_double(cells[c++]));
    log.gate_or_psi.push_back(parse_double(cells[c++]));
    log.correction_norm.push_back(parse_double(cells[c++]));
    log.tracking_err.push_back(parse_double(cells[c++]));
  }
  return log;
}

TrajectoryLog read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace smoothsafe

#include "ergoplan/dynamics/trajectory_csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ergoplan/error.hpp"

namespace ergoplan::dynamics {

namespace {

void cell(std::ostream& out, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  out << buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) cells.push_back(cur);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::vector<int>* payload) {
  const std::size_t n = traj.grid.sample_count();
  out << kTrajectoryCsvHeader << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const bool last = k + 1 == n;
    cell(out, traj.grid.time(k));
    for (int j = 0; j < kAxes; ++j) {
      out << ',';
      cell(out, traj.positions[j][k]);
    }
    for (int j = 0; j < kAxes; ++j) {
      out << ',';
      cell(out, traj.velocities[j][k]);
    }
    for (int j = 0; j < kAxes; ++j) {
      out << ',';
      if (!last) cell(out, traj.accelerations[j][k]);
    }
    for (int j = 0; j < kAxes; ++j) {
      out << ',';
      if (!last && traj.slack) cell(out, (*traj.slack)[j][k]);
    }
    out << ',';
    if (traj.heading) cell(out, (*traj.heading)[k]);
    out << ',';
    if (payload) out << (*payload)[k];
    out << '\n';
  }
}

TrajectoryFile read_trajectory_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("trajectory csv line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw fail("invalid number '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(x)) throw fail("invalid number '" + s + "'");
    return x;
  };

  if (!std::getline(in, line)) {
    line_no = 1;
    throw fail("empty file");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTrajectoryCsvHeader) throw fail("unexpected header '" + line + "'");

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != 15) throw fail("expected 15 columns, got " + std::to_string(cells.size()));
    rows.push_back(std::move(cells));
  }
  const std::size_t n = rows.size();
  if (n < 2) throw fail("need at least two samples, got " + std::to_string(n));

  std::vector<double> t(n);
  line_no = 1;
  for (std::size_t k = 0; k < n; ++k) {
    line_no = static_cast<int>(k) + 2;
    t[k] = number(rows[k][0]);
  }
  const double period = t[1] - t[0];
  if (!(period > 0.0)) throw fail("non-increasing time column");
  for (std::size_t k = 0; k < n; ++k) {
    line_no = static_cast<int>(k) + 2;
    if (std::abs(t[k] - t[0] - period * static_cast<double>(k)) > 2e-6) throw fail("non-uniform time column");
  }
  if (std::abs(t[0]) > 1e-9) throw fail("time column must start at 0");

  // Re-derive the period from the full span to undo %.6f rounding of t[1].
  const double span = t[n - 1] - t[0];
  const double ts = std::round(span / static_cast<double>(n - 1) * 1e9) / 1e9;
  TrajectoryFile file{Trajectory{TimeGrid(ts, n), {}, {}, {}, std::nullopt, std::nullopt}, std::nullopt};
  Trajectory& traj = file.trajectory;
  bool has_slack = true;
  bool has_heading = true;
  bool has_payload = true;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& r = rows[k];
    has_slack = has_slack && (k + 1 == n || (!r[10].empty() && !r[11].empty() && !r[12].empty()));
    has_heading = has_heading && !r[13].empty();
    has_payload = has_payload && !r[14].empty();
  }
  AxisSeries slack;
  std::vector<double> heading;
  std::vector<int> payload;
  for (std::size_t k = 0; k < n; ++k) {
    line_no = static_cast<int>(k) + 2;
    const auto& r = rows[k];
    const bool last = k + 1 == n;
    for (int j = 0; j < kAxes; ++j) {
      traj.positions[j].push_back(number(r[1 + j]));
      traj.velocities[j].push_back(number(r[4 + j]));
      if (!last) {
        if (r[7 + j].empty()) throw fail("missing acceleration");
        traj.accelerations[j].push_back(number(r[7 + j]));
        if (has_slack) slack[j].push_back(number(r[10 + j]));
      }
    }
    if (has_heading) heading.push_back(number(r[13]));
    if (has_payload) payload.push_back(static_cast<int>(std::lround(number(r[14]))));
  }
  if (has_slack) traj.slack = std::move(slack);
  if (has_heading) traj.heading = std::move(heading);
  if (has_payload) file.payload = std::move(payload);
  return file;
}

}  // namespace ergoplan::dynamics

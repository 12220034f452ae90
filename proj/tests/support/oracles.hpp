#pragma once

// Independent reference computations used by the unit and acceptance suites.
// Nothing here calls into the code paths it checks.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

// ---- relapse: enumerate every maximal run of heavy readings ----------------

struct Run {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

inline std::vector<Run> heavy_runs(const std::vector<int>& grades) {
  std::vector<Run> runs;
  for (std::size_t i = 0; i < grades.size();) {
    if (grades[i] < 4) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < grades.size() && grades[j] >= 4) ++j;
    runs.push_back({i, j});
    i = j;
  }
  return runs;
}

struct RelapseVerdict {
  int status = 0;  // 0 none, 1 suspected, 2 relapse
  int suspect_count = 0;
  std::optional<std::size_t> onset_index;
};

/// grades: 0 Negative .. 5 FourPlus.
inline RelapseVerdict relapse(const std::vector<int>& grades) {
  RelapseVerdict v;
  auto runs = heavy_runs(grades);
  if (runs.empty() || runs.back().end != grades.size()) return v;
  const auto& last = runs.back();
  v.suspect_count = static_cast<int>(last.end - last.begin);
  if (v.suspect_count >= 3) {
    v.status = 2;
    v.onset_index = last.begin;
  } else {
    v.status = 1;
  }
  return v;
}

// ---- growth bands: interval membership -------------------------------------

/// 0 green, 1 yellow, 2 red.
inline int band_of(double z) {
  if (z <= -2.0 || z >= 2.0) return 2;
  if ((z > -2.0 && z <= -1.0) || (z >= 1.0 && z < 2.0)) return 1;
  return 0;
}

// ---- blood pressure: own CSV reading and two-channel max -------------------

struct BpRow {
  int band, s90, s95, d90, d95;
};

struct BpData {
  std::map<std::pair<char, int>, std::vector<BpRow>> rows;
  int elev_s = 0, elev_d = 0, st1_s = 0, st1_d = 0, st2_s = 0, st2_d = 0;
};

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline BpData read_bp(const std::string& path) {
  BpData d;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto c = split(line);
    c.resize(7);
    if (c[0] == "*") {
      int s = std::stoi(c[3]), dia = std::stoi(c[5]);
      if (c[2] == "elevated") d.elev_s = s, d.elev_d = dia;
      if (c[2] == "stage1") d.st1_s = s, d.st1_d = dia;
      if (c[2] == "stage2") d.st2_s = s, d.st2_d = dia;
      continue;
    }
    d.rows[{c[0][0], std::stoi(c[1])}].push_back(
        {std::stoi(c[2]), std::stoi(c[3]), std::stoi(c[4]), std::stoi(c[5]), std::stoi(c[6])});
  }
  for (auto& [k, v] : d.rows) {
    std::sort(v.begin(), v.end(), [](const BpRow& a, const BpRow& b) { return a.band < b.band; });
  }
  return d;
}

struct GrowthData {
  // (sex, metric) -> (age, median, sd)
  std::map<std::pair<char, std::string>, std::vector<std::tuple<int, double, double>>> series;
};

inline GrowthData read_growth(const std::string& path) {
  GrowthData g;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto c = split(line);
    g.series[{c[0][0], c[2]}].emplace_back(std::stoi(c[1]), std::stod(c[3]), std::stod(c[4]));
  }
  return g;
}

/// Nearest row within 6 months, ties to the younger; nullopt on miss.
inline std::optional<std::pair<double, double>> growth_row(const GrowthData& g, char sex,
                                                           const std::string& metric, int age) {
  auto it = g.series.find({sex, metric});
  if (it == g.series.end()) return std::nullopt;
  std::optional<std::pair<double, double>> best;
  int best_gap = 1000;
  for (auto [a, m, s] : it->second) {
    int gap = std::abs(a - age);
    if (gap <= 6 && (gap < best_gap)) {
      best_gap = gap;
      best = std::pair{m, s};
    }
  }
  return best;
}

inline double phi(double z) {
  // Abramowitz-Stegun 7.1.26 style erf, accurate to ~1e-7; good enough for band flooring
  // away from exact band edges.
  double x = std::abs(z) / std::sqrt(2.0);
  double t = 1.0 / (1.0 + 0.3275911 * x);
  double y = 1.0 - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t +
                    0.254829592) *
                       t * std::exp(-x * x);
  return z >= 0 ? 0.5 * (1.0 + y) : 0.5 * (1.0 - y);
}

inline int channel_stage(int v, int p90, int p95, int st2) {
  if (v >= p95 + 12 || v >= st2) return 3;
  if (v >= p95) return 2;
  if (v >= p90) return 1;
  return 0;
}

inline int fixed_stage(int v, int elev, int st1, int st2) {
  if (v >= st2) return 3;
  if (v >= st1) return 2;
  if (v >= elev) return 1;
  return 0;
}

/// 0 Normal, 1 Elevated, 2 Stage1, 3 Stage2; -1 on reference miss.
inline int bp_stage(const BpData& bp, const GrowthData& g, char sex, int age_months, double height,
                    int sys, int dia, const BpRow** row_out = nullptr) {
  if (age_months / 12 >= 13) {
    return std::max(fixed_stage(sys, bp.elev_s, bp.st1_s, bp.st2_s),
                    fixed_stage(dia, bp.elev_d, bp.st1_d, bp.st2_d));
  }
  auto it = bp.rows.find({sex, age_months / 12});
  auto h = growth_row(g, sex, "height", age_months);
  if (it == bp.rows.end() || !h) return -1;
  double pct = 100.0 * phi((height - h->first) / h->second);
  const BpRow* row = &it->second.front();
  for (const auto& r : it->second) {
    if (r.band <= pct) row = &r;
  }
  if (row_out) *row_out = row;
  return std::max(channel_stage(sys, row->s90, row->s95, bp.st2_s),
                  channel_stage(dia, row->d90, row->d95, bp.st2_d));
}

// ---- adherence: walk the window one day at a time --------------------------

struct DayFact {
  int day;
  bool taken;
};

/// Days are plain integers; schedule covers [sched_start, sched_end].
inline std::pair<int, int> adherence(int sched_start, int sched_end, int per_day, const std::vector<DayFact>& facts,
                                     int win_start, int win_end) {
  int expected = 0, taken = 0;
  for (int d = win_start; d <= win_end; ++d) {
    if (d < sched_start || d > sched_end) continue;
    expected += per_day;
    std::optional<bool> last;
    for (const auto& f : facts) {
      if (f.day == d) last = f.taken;
    }
    if (last.value_or(false)) taken += per_day;
  }
  return {expected, std::min(expected, taken)};
}

// ---- criticality: any red signal -------------------------------------------

/// colors: 0 green, 1 yellow, 2 red; -1 absent. bp: 0..3 or -1.
inline bool critical(int urine, int bp, const std::vector<int>& growth, bool relapse) {
  bool red = relapse || urine == 2 || bp == 3;
  for (int gb : growth) red = red || gb == 2;
  return red;
}

}  // namespace oracle

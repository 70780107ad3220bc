#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mosob/ext_real.hpp"

namespace mosob {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
};

// One inequality experiment: empirical constants, worst defect, counts.
struct VerificationReport {
  std::string name;
  std::string target;  // the inequality being exercised, in words
  std::size_t samples = 0;
  double constant = std::numeric_limits<double>::quiet_NaN();
  double constant_coarse = std::numeric_limits<double>::quiet_NaN();
  double max_violation = 0;  // largest relative defect; <= 0 means slack
  double tolerance = 0;
  bool pass = false;
  double runtime_s = 0;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;
  Table table;

  void set(const std::string& key, double v) { summary.emplace_back(key, v); }
  double get(const std::string& key) const;
  // pass only when the defect stays within tolerance
  void finalize(bool criterion) { pass = criterion && max_violation <= tolerance; }
};

struct WorstSample {
  Point x, y;
  double t = 0, radius = 0, value = 0;
};

struct ConditionReport {
  std::string condition;
  bool holds = false;
  double beta = 0;
  double beta_coarse = 0;
  WorstSample worst;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::string detail;
  std::vector<std::pair<std::string, double>> extra;
};

std::string to_json(const VerificationReport& r, int indent = 2);
std::string to_json(const ConditionReport& r, int indent = 2);
std::string to_csv(const Table& t);
// gnuplot script plotting every column against the first one
std::string plot_script(const VerificationReport& r, const std::string& csv_name);
// writes <dir>/<name>.json, .csv and .gp
void write_report(const VerificationReport& r, const std::string& dir);

}  // namespace mosob

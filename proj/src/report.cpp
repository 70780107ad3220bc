#include "mosob/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace mosob {

using nlohmann::ordered_json;

namespace {

// JSON has no infinity; encode non-finite numbers as strings
ordered_json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ordered_json point(const Point& x) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

}  // namespace

double VerificationReport::get(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

std::string to_json(const VerificationReport& r, int indent) {
  ordered_json j;
  j["name"] = r.name;
  j["target"] = r.target;
  j["pass"] = r.pass;
  j["samples"] = r.samples;
  j["constant"] = num(r.constant);
  j["constant_coarse"] = num(r.constant_coarse);
  j["max_violation"] = num(r.max_violation);
  j["tolerance"] = num(r.tolerance);
  j["runtime_s"] = std::round(r.runtime_s * 1000) / 1000;
  ordered_json s = ordered_json::object();
  for (const auto& [k, v] : r.summary) s[k] = num(v);
  j["summary"] = s;
  j["notes"] = r.notes;
  j["rows"] = r.table.rows.size();
  return j.dump(indent);
}

std::string to_json(const ConditionReport& r, int indent) {
  ordered_json j;
  j["condition"] = r.condition;
  j["holds"] = r.holds;
  j["beta"] = num(r.beta);
  j["beta_coarse"] = num(r.beta_coarse);
  ordered_json w;
  w["x"] = point(r.worst.x);
  w["y"] = point(r.worst.y);
  w["t"] = num(r.worst.t);
  w["ball_radius"] = num(r.worst.radius);
  w["value"] = num(r.worst.value);
  j["worst_sample"] = w;
  j["counts"] = {{"samples", r.samples}, {"violations", r.violations}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  for (const auto& [k, v] : r.extra) j[k] = num(v);
  return j.dump(indent);
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n' << std::setprecision(12);
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (std::isinf(row[i])) os << (row[i] > 0 ? "inf" : "-inf");
      else os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

std::string plot_script(const VerificationReport& r, const std::string& csv_name) {
  std::ostringstream os;
  os << "# " << r.name << ": " << r.target << "\n";
  os << "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n";
  os << "set title '" << r.name << (r.pass ? " (pass)" : " (fail)") << "'\n";
  if (r.table.columns.size() < 2) {
    os << "# no tabulated columns\n";
    return os.str();
  }
  os << "set xlabel '" << r.table.columns[0] << "'\nplot ";
  for (std::size_t i = 1; i < r.table.columns.size(); ++i)
    os << (i > 1 ? ", \\\n     " : "") << "'" << csv_name << "' using 1:" << (i + 1) << " with linespoints";
  os << "\n";
  return os.str();
}

void write_report(const VerificationReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::string base = (std::filesystem::path(dir) / r.name).string();
  std::ofstream(base + ".json") << to_json(r) << '\n';
  std::ofstream(base + ".csv") << to_csv(r.table);
  std::ofstream(base + ".gp") << plot_script(r, r.name + ".csv");
}

}  // namespace mosob

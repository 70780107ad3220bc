// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria (0 when all pass).

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mosob/verify.hpp"

using namespace mosob;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

int main() {
  const std::uint64_t seed = 1;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;

  criteria.push_back({"constant-exponent oracle, n=3 p=2", [] {
    auto r = oracle_constant_exponent(3, 2, 512);
    bool ok = r.pass && r.runtime_s < 10;
    return Outcome{ok, "max rel error " + num(r.max_violation) + ", 512 points"};
  }});
  criteria.push_back({"variable exponent at p(x)=n, log-log slope n'", [] {
    auto r = oracle_exponent_at_n(3, 512);
    bool ok = r.pass && r.runtime_s < 30;
    return Outcome{ok, "slope " + num(r.get("slope")) + " vs " + num(1.5)};
  }});
  criteria.push_back({"double-phase equivalence, q<n", [seed] {
    auto r = oracle_double_phase_equivalence(3, 1.5, 2.5, seed, 512);
    return Outcome{r.pass, "c2/c1 " + num(r.get("c2_over_c1")) + ", drift " + num(r.get("drift"))};
  }});
  criteria.push_back({"convexity, Fenchel-Young and inverse sandwich suites", [seed] {
    auto r = run_property_suite(100000, seed);
    bool ok = r.pass && r.samples >= 100000 && r.runtime_s < 60;
    return Outcome{ok, std::to_string(r.samples) + " samples, max violation " + num(r.max_violation)};
  }});
  criteria.push_back({"H concavity and dilation scaling", [seed] {
    auto r = run_h_transform_checks(300, seed);
    return Outcome{r.pass, "concavity defect " + num(r.get("concavity_defect")) + ", scaling error " +
                               num(r.get("scaling_error"))};
  }});
  criteria.push_back({"Luxemburg norm of indicators", [seed] {
    auto r = run_norm_exactness(20, seed);
    return Outcome{r.pass, std::to_string(r.samples) + " boxes x exponents, max rel error " + num(r.constant)};
  }});
  criteria.push_back({"representation formula, tent and bump", [seed] {
    auto r = run_representation(512, 10, seed);
    return Outcome{r.pass, "tent " + num(r.get("tent_max_rel_error")) + ", bump " +
                               num(r.get("bump_max_rel_error")) + ", tent(0) closed form " +
                               num(r.get("tent_origin_closed_form"))};
  }});
  criteria.push_back({"weak-type sweep over the built-in families", [] {
    bool ok = true;
    std::ostringstream d;
    for (const auto& [name, phi] : builtin_radial_families(2)) {
      Experiment e;
      e.family = name;
      e.phi = phi;
      auto r = run_weak_type(e);
      ok = ok && r.pass && r.samples == 5 * 2 * 12;
      d << name << " c=" << num(r.constant) << " drift=" << num(r.get("drift")) << "; ";
    }
    std::string s = d.str();
    return Outcome{ok, s.substr(0, s.size() - 2)};
  }});
  criteria.push_back({"kernel equivalence for power and double phase", [seed] {
    auto r = run_cistro_suite(seed);
    return Outcome{r.pass, "worst c2/c1 " + num(r.constant)};
  }});
  criteria.push_back({"necessity ladder", [] {
    auto div = run_necessity_demo(2, 2.0);
    auto ctl = run_necessity_demo(2, 1.5);
    return Outcome{div.pass && ctl.pass, "p=n growth " + num(div.get("ratio_growth")) + ", p<n spread " +
                                             num(ctl.get("ratio_spread"))};
  }});
  criteria.push_back({"growth-condition truth table", [] {
    auto r = run_growth_truth_table();
    return Outcome{r.pass, std::to_string(r.samples) + " cases, " + num(r.max_violation) + " mismatches"};
  }});

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s (%s, %.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}

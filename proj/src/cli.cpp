#include "mosob/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mosob/conditions.hpp"
#include "mosob/monotone_tab.hpp"
#include "mosob/parallel.hpp"
#include "mosob/verify.hpp"

namespace mosob {

namespace {

std::vector<double> split_numbers(const std::string& s, const std::string& key) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      v.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError(key, "expected comma-separated numbers");
    }
  }
  return v;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// output to --out when given, else to the stream
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      file_.open(path);
      if (!file_) throw ConfigError("out", "cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

const GyfDocument& need_phi(const RunConfig& c) {
  if (!c.phi) throw ConfigError("phi", "this subcommand needs --phi");
  return *c.phi;
}

Point eval_point(const RunConfig& c, int n) {
  if (c.x.empty()) return Point::Zero(n);
  if (static_cast<int>(c.x.size()) != n) throw ConfigError("x", "expected " + std::to_string(n) + " coordinates");
  return Eigen::Map<const Point>(c.x.data(), n);
}

// closed form for phi_n when the document matches a worked example
std::function<double(double)> conjugate_oracle(const RunConfig& c, const Point& x) {
  const GyfDocument& d = *c.phi;
  if (c.alpha != 1.0) return {};
  const int n = d.n;
  if (c.recipe == Recipe::Circ) {
    if (d.family == "power") {
      double p = nlohmann::json::parse(d.source)["params"]["p"].get<double>();
      if (p < n) return [=](double t) { return oracle_variable_exponent(n, p, p, t); };
    }
    if (d.family == "variable_exponent") {
      const FieldSpec* f = d.find("p");
      if (f && f->field.limit()) {
        double pinf = *f->field.limit(), px = f->field(x);
        if (pinf < n) return [=](double t) { return oracle_variable_exponent(n, pinf, px, t); };
      }
    }
  }
  if (c.recipe == Recipe::None && d.family == "double_phase") {
    auto j = nlohmann::json::parse(d.source)["params"];
    double p = j["p"].get<double>(), q = j["q"].get<double>();
    const FieldSpec* f = d.find("a");
    if (f && p < n) {
      double a = f->field(x);
      return [=](double t) { return oracle_double_phase(n, p, q, a, t); };
    }
  }
  return {};
}

int cmd_conjugate(const RunConfig& c, std::ostream& out) {
  const GyfDocument& d = need_phi(c);
  Point x = eval_point(c, d.n);
  auto sc = make_sobolev_conjugate(d.phi, c.alpha, c.recipe);
  auto oracle = conjugate_oracle(c, x);
  Sink s(c.out, out);
  *s << "# phi=" << d.phi->name() << " alpha=" << c.alpha << " base=" << recipe_name(c.recipe)
     << "; H = (int_0^t (tau/base(x,tau))^{alpha/(n-alpha)} dtau)^{(n-alpha)/n}, H_inv its inverse,"
        " phi_conj = base(x, H^{-1}(x,t)), oracle = closed form (nan if none), ratio = phi_conj/oracle\n";
  for (int i = 0; i < d.n; ++i) *s << "x" << (i + 1) << ",";
  *s << "t,H,H_inv,phi_conj,oracle,ratio\n";
  for (double t : MonotoneTab::log_grid(c.t_lo, c.t_hi, c.t_points)) {
    double H = sc->H(x, t), Hi = sc->H_inverse(x, t), pc = sc->conjugate(x, t);
    double o = oracle ? oracle(t) : std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < d.n; ++i) *s << fmt(x[i]) << ",";
    *s << fmt(t) << "," << fmt(H) << "," << fmt(Hi) << "," << fmt(pc) << "," << fmt(o) << "," << fmt(pc / o) << "\n";
  }
  return kExitPass;
}

GridFunction load_grid(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("input", "this subcommand needs --input grid.csv");
  if (!std::filesystem::exists(c.input)) throw ConfigError("input", "cannot open " + c.input);
  try {
    return GridFunction::read_csv(c.input);
  } catch (const std::exception& e) {
    throw ConfigError("input", e.what());
  }
}

int cmd_norm(const RunConfig& c, std::ostream& out) {
  const GyfDocument& d = need_phi(c);
  auto g = load_grid(c);
  GyfPtr phi = c.recipe_given ? normalize(d.phi, c.recipe) : d.phi;
  nlohmann::ordered_json j;
  j["phi"] = phi->name();
  j["cells"] = g.size();
  j["layout"] = layout_name(g.layout());
  double m = modular(*phi, g);
  j["modular"] = std::isinf(m) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(m);
  double nrm = luxemburg_norm(*phi, g, c.tol.norm);
  j["norm"] = std::isinf(nrm) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(nrm);
  Sink s(c.out, out);
  *s << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_riesz(const RunConfig& c, std::ostream& out) {
  auto g = load_grid(c);
  auto r = riesz_potential(g, c.alpha);
  if (c.out.empty()) {
    std::string tmp = (std::filesystem::temp_directory_path() / "mosob_riesz.csv").string();
    r.write_csv(tmp);
    out << std::ifstream(tmp).rdbuf();
    std::filesystem::remove(tmp);
  } else {
    r.write_csv(c.out);
  }
  return kExitPass;
}

int cmd_maximal(const RunConfig& c, std::ostream& out) {
  auto g = load_grid(c);
  auto radii = c.radii;
  if (radii.empty()) {
    double h;
    if (g.layout() == Layout::Tensor) h = *std::min_element(g.spacing().begin(), g.spacing().end());
    else if (!g.edges().empty()) h = g.edges()[1] - g.edges()[0];
    else h = g.domain().diameter() / 64;
    radii = dyadic_radii(h, g.domain().diameter());
  }
  auto m = maximal_function(g, radii);
  if (c.out.empty()) {
    std::string tmp = (std::filesystem::temp_directory_path() / "mosob_maximal.csv").string();
    m.write_csv(tmp);
    out << std::ifstream(tmp).rdbuf();
    std::filesystem::remove(tmp);
  } else {
    m.write_csv(c.out);
  }
  return kExitPass;
}

int cmd_conditions(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const GyfDocument& d = need_phi(c);
  auto spec = SampleSpec::make(d.n, c.seed, 16, 2.0, 1e-3, 1e3, 8);
  BallSample bs;
  bs.seed = c.seed;
  std::vector<std::string> parts;
  bool all = true;
  auto add = [&](const ConditionReport& r) {
    parts.push_back(to_json(r));
    all = all && r.holds;
  };
  add(check_A0(*d.phi, spec.xs));
  add(check_A1(*d.phi, bs));
  try {
    add(check_A2pp(*d.phi, nullptr, c.beta));
  } catch (const PreconditionError& e) {
    err << "decay condition skipped: " << e.what() << "\n";
  }
  try {
    add(check_normalized(*normalize(d.phi, c.recipe), bs, spec.xs));
  } catch (const std::exception& e) {
    err << "normalization check skipped: " << e.what() << "\n";
  }
  auto g = check_growth_condition(*d.phi, c.alpha);
  nlohmann::ordered_json gj;
  gj["condition"] = "growth_at_zero";
  gj["holds"] = g.converges;
  gj["value"] = std::isfinite(g.value) ? nlohmann::ordered_json(g.value) : nlohmann::ordered_json("inf");
  parts.push_back(gj.dump(2));
  all = all && g.converges;
  Sink s(c.out, out);
  *s << "[\n";
  for (std::size_t i = 0; i < parts.size(); ++i) *s << parts[i] << (i + 1 < parts.size() ? ",\n" : "\n");
  *s << "]\n";
  return all ? kExitPass : kExitViolation;
}

Experiment make_experiment(const RunConfig& c) {
  Experiment e;
  e.n = c.n;
  e.alpha = c.alpha;
  e.recipe = c.recipe;
  e.resolution = c.resolution;
  e.levels = c.levels;
  e.r_max = c.r_max;
  e.drift_tol = c.tol.drift;
  e.seed = c.seed;
  e.profiles = c.profiles;
  e.family = c.family;
  if (c.phi) {
    e.phi = c.phi->phi;
    e.family = c.phi->family;
    e.n = c.phi->n;
  }
  return e;
}

int finish(const VerificationReport& r, const RunConfig& c, std::ostream& out) {
  const std::string dir = c.out.empty() ? "reports" : c.out;
  write_report(r, dir);
  out << (r.pass ? "PASS " : "FAIL ") << r.name << " constant=" << fmt(r.constant)
      << " max_violation=" << fmt(r.max_violation) << " samples=" << r.samples;
  for (const auto& n : r.notes) out << " | " << n;
  out << "\n";
  return r.pass ? kExitPass : kExitViolation;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const std::string& x = c.experiment;
  if (x.empty()) throw ConfigError("exp", "verify needs --exp");
  if (x == "weak-type") return finish(run_weak_type(make_experiment(c)), c, out);
  if (x == "modular-sobolev") return finish(run_modular_sobolev(make_experiment(c)), c, out);
  if (x == "poincare-zero") return finish(run_poincare_zero(make_experiment(c)), c, out);
  if (x == "necessity") return finish(run_necessity_demo(c.n, c.p), c, out);
  if (x == "oracle-suite") return finish(run_oracle_suite({c.points, c.seed}), c, out);
  if (x == "properties") return finish(run_property_suite(100000, c.seed), c, out);
  if (x == "h-transform") return finish(run_h_transform_checks(300, c.seed), c, out);
  if (x == "norm-exactness") return finish(run_norm_exactness(20, c.seed), c, out);
  if (x == "growth") return finish(run_growth_truth_table(), c, out);
  if (x == "cistro") return finish(run_cistro_suite(c.seed), c, out);
  if (x == "representation") return finish(run_representation(512, 10, c.seed), c, out);
  throw ConfigError("exp",
                    "expected weak-type, modular-sobolev, poincare-zero, necessity, oracle-suite, properties, "
                    "h-transform, norm-exactness, growth, cistro or representation");
}

}  // namespace

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    set_thread_count(c.threads);
    if (c.command == "conjugate") return cmd_conjugate(c, out);
    if (c.command == "norm") return cmd_norm(c, out);
    if (c.command == "riesz") return cmd_riesz(c, out);
    if (c.command == "maximal") return cmd_maximal(c, out);
    if (c.command == "conditions") return cmd_conditions(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out);
    if (c.command == "oracle-suite") return finish(run_oracle_suite({c.points, c.seed}), c, out);
    err << "error: unknown subcommand '" << c.command << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
  } catch (const GrowthConditionError& e) {
    err << "growth condition: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Musielak-Orlicz Sobolev toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config, phi, normalize_s, out_s, tgrid, xs, radii, profiles;
  double alpha = 1, tol_norm = 0, tol_rep = 0, tol_drift = 0, beta = 0.5, p = 2, r_max = 0;
  int n = 2, threads = 1, resolution = 8, levels = 12, points = 512;
  std::uint64_t seed = 1;
  std::string input, exp, family;

  auto* o_config = app.add_option("--config", config, "run document (JSON)")->envname("MOSOB_CONFIG");
  auto* o_phi = app.add_option("--phi", phi, "GYF document (JSON)")->envname("MOSOB_PHI");
  auto* o_alpha = app.add_option("--alpha", alpha, "order in (0, n)")->envname("MOSOB_ALPHA");
  auto* o_n = app.add_option("--n", n, "dimension")->envname("MOSOB_N");
  auto* o_norm = app.add_option("--normalize", normalize_s, "bar|hat|circ|bullet|none")
                     ->check(CLI::IsMember({"bar", "hat", "circ", "bullet", "none"}))
                     ->envname("MOSOB_NORMALIZE");
  auto* o_tn = app.add_option("--tol-norm", tol_norm, "relative accuracy of norms")->envname("MOSOB_TOL_NORM");
  auto* o_tr = app.add_option("--tol-rep", tol_rep, "representation tolerance")->envname("MOSOB_TOL_REP");
  auto* o_td = app.add_option("--tol-drift", tol_drift, "allowed resolution drift")->envname("MOSOB_TOL_DRIFT");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized samples")->envname("MOSOB_SEED");
  auto* o_out = app.add_option("--out", out_s, "output file or directory")->envname("MOSOB_OUT");
  auto* o_thr = app.add_option("--threads", threads, "worker threads")->envname("MOSOB_THREADS");

  auto* conj = app.add_subcommand("conjugate", "tabulate H, H^{-1} and the Sobolev conjugate at one point");
  auto* o_x = conj->add_option("--x", xs, "evaluation point, comma separated");
  auto* o_tg = conj->add_option("--t-grid", tgrid, "lo:hi:k");
  auto* norm = app.add_subcommand("norm", "modular and Luxemburg norm of a grid function");
  auto* riesz = app.add_subcommand("riesz", "Riesz potential of a grid function");
  auto* maxi = app.add_subcommand("maximal", "maximal function of a grid function");
  auto* o_radii = maxi->add_option("--radii", radii, "radius ladder, comma separated");
  for (auto* s : {norm, riesz, maxi}) s->add_option("--input", input, "grid CSV")->envname("MOSOB_INPUT");
  auto* cond = app.add_subcommand("conditions", "check the structural conditions of --phi");
  auto* o_beta = cond->add_option("--beta", beta, "beta for the decay condition");
  auto* ver = app.add_subcommand("verify", "run one experiment and write its report");
  auto* o_exp = ver->add_option("--exp", exp, "experiment name");
  auto* o_fam = ver->add_option("--family", family, "power|orlicz|variable_exponent|double_phase");
  auto* o_res = ver->add_option("--resolution", resolution, "radial cells per octave");
  auto* o_lev = ver->add_option("--levels", levels, "t-ladder length");
  auto* o_rmax = ver->add_option("--r-max", r_max, "outer radius of whole-space grids");
  auto* o_p = ver->add_option("--p", p, "exponent for the necessity demo");
  auto* o_prof = ver->add_option("--profiles", profiles, "e.g. tent:1,bump:0.5");
  auto* orc = app.add_subcommand("oracle-suite", "generic conjugates against the closed forms");
  auto* o_pts = orc->add_option("--points", points, "table points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  RunConfig c;
  try {
    if (*o_config) c = parse_config(config);
    c.command = app.get_subcommands().front()->get_name();
    if (*o_phi) {
      c.phi_path = phi;
      c.phi = load_gyf_document(phi);
      c.n = c.phi->n;
    }
    if (*o_n) {
      if (c.phi && c.phi->n != n) throw ConfigError("n", "differs from the dimension of phi");
      c.n = n;
    }
    if (*o_alpha) c.alpha = alpha;
    if (*o_norm) {
      c.recipe = parse_recipe(normalize_s);
      c.recipe_given = true;
    }
    if (*o_tn) c.tol.norm = tol_norm;
    if (*o_tr) c.tol.rep = tol_rep;
    if (*o_td) c.tol.drift = tol_drift;
    if (*o_seed) c.seed = seed;
    if (*o_out) c.out = out_s;
    if (*o_thr) c.threads = threads;
    if (*o_x) c.x = split_numbers(xs, "x");
    if (*o_tg) parse_t_grid(tgrid, c.t_lo, c.t_hi, c.t_points);
    if (!input.empty()) c.input = input;
    if (*o_radii) c.radii = split_numbers(radii, "radii");
    if (*o_beta) c.beta = beta;
    if (*o_exp) c.experiment = exp;
    if (*o_fam) c.family = family;
    if (*o_res) c.resolution = resolution;
    if (*o_lev) c.levels = levels;
    if (*o_rmax) c.r_max = r_max;
    if (*o_p) c.p = p;
    if (*o_prof) {
      c.profiles.clear();
      std::stringstream ss(profiles);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) c.profiles.push_back(parse_profile(tok));
    }
    if (*o_pts) c.points = points;
    if (!(c.alpha > 0 && c.alpha < c.n)) throw ConfigError("alpha", "expected 0 < alpha < n");
    if (c.threads < 1) throw ConfigError("threads", "expected integer >= 1");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  return dispatch(c, out, err);
}

}  // namespace mosob

#include "mosob/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mosob {

using nlohmann::json;

namespace {

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) {
      std::string list;
      for (auto& k : ok) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError(join(where, it.key()), "unknown key (expected one of: " + list + ")");
    }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) throw ConfigError(join(where, key), "missing required key");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ConfigError(path, "expected number");
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected boolean");
  return j.get<bool>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin, std::string("not valid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_exponent(const std::string& name) { return name == "p" || name == "q"; }

FieldSpec parse_field(const json& j, const std::string& where, int n) {
  if (!j.is_object()) throw ConfigError(where, "expected object");
  only_keys(j, where, {"name", "kind", "payload", "range", "limit"});
  FieldSpec f;
  f.name = string(require(j, where, "name"), join(where, "name"));
  f.kind = string(require(j, where, "kind"), join(where, "kind"));
  const json& payload = require(j, where, "payload");
  const std::string pp = join(where, "payload");

  double lo = -kInf, hi = kInf;
  bool has_range = j.contains("range");
  if (has_range) {
    auto r = numbers(j["range"], join(where, "range"));
    if (r.size() != 2 || !(r[0] <= r[1])) throw ConfigError(join(where, "range"), "expected [lo, hi] with lo <= hi");
    lo = r[0];
    hi = r[1];
  }
  const double floor = is_exponent(f.name) ? 1.0 : (f.name == "a" ? 0.0 : -kInf);
  if (has_range && lo < floor)
    throw ConfigError(join(where, "range"), is_exponent(f.name) ? "exponent below 1 (expected lo >= 1)"
                                                                : "coefficient below 0 (expected lo >= 0)");
  if (!has_range) lo = floor;

  if (f.kind == "constant") {
    double v = number(payload, pp);
    if (v < floor) throw ConfigError(pp, is_exponent(f.name) ? "exponent below 1" : "coefficient below 0");
    if (v < lo || v > hi) throw ConfigError(pp, "value outside the declared range");
    f.field = SpatialField::constant(v, n);
  } else if (f.kind == "expression") {
    try {
      f.field = SpatialField::expression(string(payload, pp), n, lo, hi);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(pp, e.what());
    }
  } else if (f.kind == "grid") {
    if (!payload.is_object()) throw ConfigError(pp, "expected object");
    SpatialField::GridData g;
    if (payload.contains("r")) {
      only_keys(payload, pp, {"radial", "r", "values"});
      g.radial = true;
      g.r = numbers(payload["r"], join(pp, "r"));
    } else {
      only_keys(payload, pp, {"radial", "lo", "hi", "shape", "values"});
      g.radial = false;
      auto l = numbers(require(payload, pp, "lo"), join(pp, "lo"));
      auto h = numbers(require(payload, pp, "hi"), join(pp, "hi"));
      if (static_cast<int>(l.size()) != n || static_cast<int>(h.size()) != n)
        throw ConfigError(join(pp, "lo"), "expected n coordinates");
      g.lo = Eigen::Map<Eigen::VectorXd>(l.data(), n);
      g.hi = Eigen::Map<Eigen::VectorXd>(h.data(), n);
      const json& s = require(payload, pp, "shape");
      if (!s.is_array()) throw ConfigError(join(pp, "shape"), "expected array of integers");
      for (std::size_t i = 0; i < s.size(); ++i) g.shape.push_back(integer(s[i], join(pp, "shape")));
    }
    if (payload.contains("radial") && boolean(payload["radial"], join(pp, "radial")) != g.radial)
      throw ConfigError(join(pp, "radial"), "radial grids give r, tensor grids give lo/hi/shape");
    g.values = numbers(require(payload, pp, "values"), join(pp, "values"));
    for (double v : g.values)
      if (v < lo || v > hi)
        throw ConfigError(join(pp, "values"), v < floor && is_exponent(f.name) ? "exponent below 1"
                                                                                  : "value outside the declared range");
    try {
      f.field = SpatialField::grid(std::move(g), n);
      f.field.set_range(lo, hi);
    } catch (const std::exception& e) {
      throw ConfigError(pp, e.what());
    }
  } else {
    throw ConfigError(join(where, "kind"), "expected constant, expression or grid");
  }
  if (j.contains("limit")) f.field.set_limit(number(j["limit"], join(where, "limit")));
  else if (f.field.is_constant()) f.field.set_limit(f.field.constant_value());
  return f;
}

GyfDocument parse_gyf_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected object");
  only_keys(j, where, {"family", "n", "params", "fields"});
  GyfDocument d;
  d.family = string(require(j, where, "family"), join(where, "family"));
  d.n = j.contains("n") ? integer(j["n"], join(where, "n")) : 2;
  if (d.n < 1 || d.n > 16) throw ConfigError(join(where, "n"), "expected integer in [1, 16]");
  json params = j.contains("params") ? j["params"] : json::object();
  const std::string pw = join(where, "params");
  if (!params.is_object()) throw ConfigError(pw, "expected object");
  if (j.contains("fields")) {
    const json& fs = j["fields"];
    if (!fs.is_array()) throw ConfigError(join(where, "fields"), "expected array");
    for (std::size_t i = 0; i < fs.size(); ++i)
      d.fields.push_back(parse_field(fs[i], join(where, "fields[" + std::to_string(i) + "]"), d.n));
  }
  auto field = [&](const char* name) -> SpatialField {
    const FieldSpec* f = d.find(name);
    if (!f) throw ConfigError(join(where, "fields"), std::string("missing field '") + name + "'");
    return f->field;
  };
  auto param = [&](const char* key, double dflt, bool required = false) {
    if (!params.contains(key)) {
      if (required) throw ConfigError(join(pw, key), "missing required key");
      return dflt;
    }
    return number(params[key], join(pw, key));
  };
  auto exponent = [&](const char* key) {
    double p = param(key, 0, true);
    if (p < 1) throw ConfigError(join(pw, key), "exponent below 1");
    return p;
  };

  const std::string& fam = d.family;
  if (fam == "power") {
    only_keys(params, pw, {"p", "c", "dilation"});
    double c = param("c", 1.0);
    if (!(c > 0)) throw ConfigError(join(pw, "c"), "expected positive number");
    d.phi = make_power(d.n, exponent("p"), c);
  } else if (fam == "orlicz") {
    only_keys(params, pw, {"A", "dilation"});
    std::string A = string(require(params, pw, "A"), join(pw, "A"));
    try {
      d.phi = make_orlicz(d.n, A);
    } catch (const std::exception& e) {
      throw ConfigError(join(pw, "A"), e.what());
    }
  } else if (fam == "variable_exponent") {
    only_keys(params, pw, {"scaled", "dilation"});
    bool sc = params.contains("scaled") && boolean(params["scaled"], join(pw, "scaled"));
    d.phi = make_variable_exponent(d.n, field("p"), sc);
  } else if (fam == "double_phase") {
    only_keys(params, pw, {"p", "q", "combine", "dilation"});
    double p = exponent("p"), q = exponent("q");
    if (!(q > p)) throw ConfigError(join(pw, "q"), "expected q > p");
    PhaseCombine mode = PhaseCombine::Sum;
    if (params.contains("combine")) {
      auto m = string(params["combine"], join(pw, "combine"));
      if (m == "max") mode = PhaseCombine::Max;
      else if (m != "sum") throw ConfigError(join(pw, "combine"), "expected sum or max");
    }
    d.phi = make_double_phase(d.n, p, q, field("a"), mode);
  } else if (fam == "variable_double_phase") {
    only_keys(params, pw, {"dilation"});
    d.phi = make_variable_double_phase(d.n, field("p"), field("q"), field("a"));
  } else if (fam == "tabulated") {
    only_keys(params, pw, {"t", "values", "infinite_tail", "dilation"});
    auto t = numbers(require(params, pw, "t"), join(pw, "t"));
    auto v = numbers(require(params, pw, "values"), join(pw, "values"));
    bool tail = params.contains("infinite_tail") && boolean(params["infinite_tail"], join(pw, "infinite_tail"));
    try {
      d.phi = make_tabulated(d.n, t, v, tail);
    } catch (const std::exception& e) {
      throw ConfigError(pw, e.what());
    }
  } else {
    throw ConfigError(join(where, "family"),
                      "expected power, orlicz, variable_exponent, double_phase, variable_double_phase or tabulated");
  }
  if (params.contains("dilation")) {
    double k = number(params["dilation"], join(pw, "dilation"));
    if (!(k > 0)) throw ConfigError(join(pw, "dilation"), "expected positive number");
    d.phi = make_dilated(d.phi, k);
  }
  d.source = j.dump();
  return d;
}

}  // namespace

const FieldSpec* GyfDocument::find(const std::string& name) const {
  for (const auto& f : fields)
    if (f.name == name) return &f;
  return nullptr;
}

GyfDocument parse_gyf_document(const std::string& text) { return parse_gyf_json(parse_json(text, "phi"), ""); }

GyfDocument load_gyf_document(const std::string& path) { return parse_gyf_document(read_file(path)); }

void parse_t_grid(const std::string& spec, double& lo, double& hi, int& k) {
  std::stringstream ss(spec);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
    throw ConfigError("t_grid", "expected lo:hi:k");
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    k = std::stoi(c);
  } catch (const std::exception&) {
    throw ConfigError("t_grid", "expected lo:hi:k with numbers");
  }
  if (!(lo > 0 && hi > lo) || k < 2) throw ConfigError("t_grid", "expected 0 < lo < hi and k >= 2");
}

RadialProfile parse_profile(const std::string& spec) {
  std::stringstream ss(spec);
  std::string tok;
  std::vector<std::string> parts;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.empty()) throw ConfigError("profiles", "empty profile");
  std::vector<double> a;
  try {
    for (std::size_t i = 1; i < parts.size(); ++i) a.push_back(std::stod(parts[i]));
  } catch (const std::exception&) {
    throw ConfigError("profiles", "bad number in '" + spec + "'");
  }
  auto arg = [&](std::size_t i, double d) { return i < a.size() ? a[i] : d; };
  const std::string& k = parts[0];
  if (k == "tent") return tent(arg(0, 1.0), arg(1, 1.0));
  if (k == "bump") return bump(arg(0, 1.0));
  if (k == "gaussian") return gaussian(arg(0, 1.0));
  if (k == "plateau") return plateau(arg(0, 0.5), arg(1, 1.0), static_cast<int>(arg(2, 2)));
  if (k == "zero") return scaled(tent(1.0), 0.0);
  throw ConfigError("profiles", "expected tent, bump, gaussian, plateau or zero, got '" + k + "'");
}

RunConfig parse_config_text(const std::string& text) {
  json j = parse_json(text, "config");
  RunConfig c;
  if (!j.is_object()) throw ConfigError("", "expected a JSON object");
  if (j.contains("family")) {
    c.phi = parse_gyf_json(j, "");
    c.n = c.phi->n;
    return c;
  }
  only_keys(j, "", {"command", "phi", "alpha", "n", "normalize", "experiment", "input", "x", "t_grid", "radii",
                    "tolerances", "seed", "out", "threads", "resolution", "levels", "r_max", "p", "profiles", "family", "beta", "points"});
  if (j.contains("command")) c.command = string(j["command"], "command");
  if (j.contains("phi")) {
    if (j["phi"].is_string()) {
      c.phi_path = j["phi"].get<std::string>();
      c.phi = load_gyf_document(c.phi_path);
    } else {
      c.phi = parse_gyf_json(j["phi"], "phi");
    }
    c.n = c.phi->n;
  }
  if (j.contains("alpha")) c.alpha = number(j["alpha"], "alpha");
  if (j.contains("n")) c.n = integer(j["n"], "n");
  if (c.phi && c.phi->n != c.n) throw ConfigError("n", "differs from the dimension of phi");
  if (j.contains("normalize")) {
    try {
      c.recipe = parse_recipe(string(j["normalize"], "normalize"));
      c.recipe_given = true;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("normalize", "expected bar, hat, circ, bullet or none");
    }
  }
  if (j.contains("experiment")) c.experiment = string(j["experiment"], "experiment");
  if (j.contains("input")) c.input = string(j["input"], "input");
  if (j.contains("x")) c.x = numbers(j["x"], "x");
  if (j.contains("t_grid")) parse_t_grid(string(j["t_grid"], "t_grid"), c.t_lo, c.t_hi, c.t_points);
  if (j.contains("radii")) c.radii = numbers(j["radii"], "radii");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "expected object");
    only_keys(t, "tolerances", {"norm", "rep", "drift"});
    if (t.contains("norm")) c.tol.norm = number(t["norm"], "tolerances.norm");
    if (t.contains("rep")) c.tol.rep = number(t["rep"], "tolerances.rep");
    if (t.contains("drift")) c.tol.drift = number(t["drift"], "tolerances.drift");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("out")) c.out = string(j["out"], "out");
  if (j.contains("threads")) c.threads = integer(j["threads"], "threads");
  if (j.contains("resolution")) c.resolution = integer(j["resolution"], "resolution");
  if (j.contains("levels")) c.levels = integer(j["levels"], "levels");
  if (j.contains("r_max")) c.r_max = number(j["r_max"], "r_max");
  if (j.contains("p")) c.p = number(j["p"], "p");
  if (j.contains("family")) c.family = string(j["family"], "family");
  if (j.contains("beta")) c.beta = number(j["beta"], "beta");
  if (j.contains("points")) c.points = integer(j["points"], "points");
  if (j.contains("profiles")) {
    const json& ps = j["profiles"];
    if (!ps.is_array()) throw ConfigError("profiles", "expected array of strings");
    for (std::size_t i = 0; i < ps.size(); ++i)
      c.profiles.push_back(parse_profile(string(ps[i], "profiles[" + std::to_string(i) + "]")));
  }
  if (!(c.alpha > 0 && c.alpha < c.n)) throw ConfigError("alpha", "expected 0 < alpha < n");
  if (c.threads < 1) throw ConfigError("threads", "expected integer >= 1");
  if (c.resolution < 1) throw ConfigError("resolution", "expected integer >= 1");
  if (c.levels < 1) throw ConfigError("levels", "expected integer >= 1");
  return c;
}

RunConfig parse_config(const std::string& path) { return parse_config_text(read_file(path)); }

}  // namespace mosob

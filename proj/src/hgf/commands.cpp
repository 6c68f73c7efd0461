// Copyright 2026 The hgf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hgf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "hgf/error.hpp"
#include "hgf/functions.hpp"
#include "hgf/gen_func.hpp"
#include "hgf/heat.hpp"
#include "hgf/ladder.hpp"
#include "hgf/stochastic.hpp"

namespace hgf {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Key-checked view of one JSON object.
class Section {
 public:
  Section(const json& j, std::string where, const std::vector<std::string>& keys) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
        throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  const json& raw(const std::string& k) const {
    if (!has(k)) throw ConfigError(where_ + ": missing key '" + k + "'");
    return j_.at(k);
  }

  int integer(const std::string& k, std::optional<int> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_number_integer()) bad(k, "an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& k, std::optional<std::uint64_t> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      bad(k, "a non-negative integer");
    return v.get<std::uint64_t>();
  }

  double number(const std::string& k, std::optional<double> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_number()) bad(k, "a number");
    return v.get<double>();
  }

  bool flag(const std::string& k, bool def) const {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    if (!v.is_boolean()) bad(k, "a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& k, std::optional<std::string> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_string()) bad(k, "a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& k, std::optional<std::vector<double>> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) bad(k, "a number array");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) bad(k, "a number array");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& k, std::optional<std::vector<int>> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_array()) bad(k, "an integer array");
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) bad(k, "an integer array");
      out.push_back(e.get<int>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& k, std::optional<std::vector<std::string>> def = {}) const {
    if (!has(k)) return fallback(k, def);
    const json& v = j_.at(k);
    if (!v.is_array()) bad(k, "a string array");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) bad(k, "a string array");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  const std::string& where() const noexcept { return where_; }

 private:
  template <class T>
  T fallback(const std::string& k, const std::optional<T>& def) const {
    if (!def) throw ConfigError(where_ + ": missing key '" + k + "'");
    return *def;
  }
  [[noreturn]] void bad(const std::string& k, const char* what) const {
    throw ConfigError(where_ + ": '" + k + "' must be " + what);
  }

  const json& j_;
  std::string where_;
};

class CsvFile {
 public:
  explicit CsvFile(const fs::path& path) : path_(path), os_(path, std::ios::binary) {
    if (!os_) throw IoError("cannot write " + path.string());
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
  std::ofstream os_;
};

struct Context {
  fs::path out;
  CommandResult* result;

  fs::path file(const std::string& name) const {
    result->files.push_back(out / name);
    return out / name;
  }
};

const std::vector<std::string> kSpecKeys{"dim", "level", "nodes", "halfwidth", "tol"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  a.push_back("command");
  a.push_back("out");
  return a;
}

// `tol` is the quadrature defect tolerance unless the command uses it for
// its own criterion.
BasisSpec read_spec(const Section& s, int default_level, bool tol_is_defect = true) {
  const int dim = s.integer("dim", 1);
  const int level = s.integer("level", default_level);
  if (dim < 1) throw ConfigError(s.where() + ": dim must be >= 1");
  if (level < 0) throw ConfigError(s.where() + ": level must be >= 0");
  BasisSpec spec = BasisSpec::make(dim, level);
  if (s.has("nodes")) spec.nodes = s.integer("nodes");
  if (s.has("halfwidth")) spec.halfwidth = s.number("halfwidth");
  if (tol_is_defect && s.has("tol")) spec.defect_tol = s.number("tol");
  try {
    spec.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(s.where() + ": " + e.what());
  }
  return spec;
}

std::vector<double> read_point(const Section& s, const std::string& key, int dim) {
  auto p = s.numbers(key, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  if (static_cast<int>(p.size()) != dim)
    throw ConfigError(s.where() + ": '" + key + "' needs " + std::to_string(dim) + " coordinates");
  return p;
}

// {"kind": dirac | dirac_derivative | function | coefficients | unit | zero, ...}
DistributionSpec read_distribution(const json& j, const std::string& where, const BasisSpec& spec) {
  const Section s(j, where, {"kind", "point", "axis", "name", "file", "beta"});
  const std::string kind = s.text("kind");
  const int dim = spec.dim;
  if (kind == "dirac") return DistributionSpec::dirac(read_point(s, "point", dim));
  if (kind == "dirac_derivative") {
    const int axis = s.integer("axis", 0);
    if (axis < 0 || axis >= dim) throw ConfigError(where + ": axis out of range");
    return DistributionSpec::dirac_derivative(read_point(s, "point", dim), axis);
  }
  if (kind == "function") {
    try {
      return DistributionSpec::sampled(named_function(s.text("name")), dim);
    } catch (const InvalidInput& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (kind == "coefficients") return DistributionSpec::coefficients(read_coeff_csv(s.text("file")));
  if (kind == "unit") {
    const auto beta = s.integers("beta");
    if (static_cast<int>(beta.size()) != dim) throw ConfigError(where + ": beta needs " + std::to_string(dim) + " entries");
    const int top = *std::max_element(beta.begin(), beta.end());
    if (*std::min_element(beta.begin(), beta.end()) < 0) throw ConfigError(where + ": beta entries must be >= 0");
    return DistributionSpec::coefficients(CoeffTensor::unit(spec.with_level(std::max(top, spec.level)), MultiIndex(beta)));
  }
  if (kind == "zero") return DistributionSpec::coefficients(CoeffTensor(spec));
  throw ConfigError(where + ": unknown distribution kind '" + kind + "'");
}

// An element from either an "input" coefficient file or a "distribution".
GenFuncRep read_element(const Section& s, const BasisSpec& spec) {
  if (s.has("input") && s.has("distribution")) throw ConfigError(s.where() + ": give either input or distribution");
  if (s.has("input")) return GenFuncRep(read_coeff_csv(s.text("input")));
  if (s.has("distribution")) return embed(read_distribution(s.raw("distribution"), "distribution", spec), spec);
  throw ConfigError(s.where() + ": missing input or distribution");
}

std::vector<TestFunction> read_tests(const Section& s, const std::string& key, std::vector<std::string> def) {
  std::vector<TestFunction> out;
  for (const auto& name : s.strings(key, def)) {
    try {
      out.push_back(named_test(name));
    } catch (const InvalidInput& e) {
      throw ConfigError(s.where() + ": " + e.what());
    }
  }
  if (out.empty()) throw ConfigError(s.where() + ": '" + key + "' is empty");
  return out;
}

std::pair<double, double> read_band(const Section& s, const std::string& key, std::pair<double, double> def) {
  if (!s.has(key)) return def;
  const auto b = s.numbers(key);
  if (b.size() != 2 || !(b[0] <= b[1])) throw ConfigError(s.where() + ": '" + key + "' must be [lo, hi]");
  return {b[0], b[1]};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os || !(os << text)) throw IoError("cannot write " + path.string());
}

// ---------------------------------------------------------------- basis-check

ExitStatus cmd_basis_check(const json& j, const Context& ctx) {
  const Section s(j, "basis-check", with(kSpecKeys, {"function", "fd_steps", "order_band"}));
  const BasisSpec spec = read_spec(s, 32);
  Evaluable f;
  try {
    f = named_function(s.text("function", "cos_gauss"));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("basis-check: ") + e.what());
  }
  const auto steps = s.numbers("fd_steps", std::vector<double>{0.02, 0.01, 0.005, 0.0025});
  if (steps.size() < 2) throw ConfigError("basis-check: fd_steps needs at least two steps");
  for (double h : steps)
    if (!(h > 0.0)) throw ConfigError("basis-check: fd_steps must be positive");
  const auto band = read_band(s, "order_band", {1.9, 2.1});

  const auto rule = build_quadrature_unchecked(spec);
  const bool gram_ok = rule->gram_defect < spec.defect_tol;
  {
    CsvFile gram(ctx.file("basis_gram.csv"));
    gram.row({"dim", "level", "nodes", "halfwidth", "gram_defect", "tol", "pass"});
    gram.row({std::to_string(spec.dim), std::to_string(spec.level), std::to_string(spec.nodes), num(spec.halfwidth),
              num(rule->gram_defect), num(spec.defect_tol), gram_ok ? "1" : "0"});
  }
  if (!gram_ok) {
    ctx.result->message = "gram defect " + num(rule->gram_defect) + " exceeds " + num(spec.defect_tol);
    return ExitStatus::breach;
  }

  // Ladder derivative of the section against central differences of the
  // same section along axis 0 (other coordinates at zero).
  const CoeffTensor a = analyze(f, spec);
  const CoeffTensor da = ladder_derivative(a, 0);
  const int npts = 41;
  const double range = 4.0;
  std::vector<double> errs;
  for (double h : steps) {
    double worst = 0.0;
    std::vector<double> x(static_cast<std::size_t>(spec.dim), 0.0), xp = x, xm = x;
    for (int i = 0; i < npts; ++i) {
      x[0] = -range + 2.0 * range * i / (npts - 1);
      xp[0] = x[0] + h;
      xm[0] = x[0] - h;
      const double fd = (synthesize(a, xp) - synthesize(a, xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(synthesize(da, x) - fd));
    }
    errs.push_back(worst);
  }
  bool orders_ok = true;
  CsvFile lad(ctx.file("basis_ladder.csv"));
  lad.row({"h", "max_error", "observed_order"});
  for (std::size_t k = 0; k < steps.size(); ++k) {
    std::string ord;
    if (k > 0) {
      const double p = std::log(errs[k - 1] / errs[k]) / std::log(steps[k - 1] / steps[k]);
      ord = num(p);
      if (!(p >= band.first && p <= band.second)) orders_ok = false;
    }
    lad.row({num(steps[k]), num(errs[k]), ord});
  }
  ctx.result->message = "gram defect " + num(rule->gram_defect) + (orders_ok ? ", ladder orders in band" : ", ladder order outside band");
  return orders_ok ? ExitStatus::pass : ExitStatus::breach;
}

// --------------------------------------------------------------------- expand

ExitStatus cmd_expand(const json& j, const Context& ctx) {
  const Section s(j, "expand", with(kSpecKeys, {"distribution", "name"}));
  const BasisSpec spec = read_spec(s, 16);
  const auto dist = read_distribution(s.raw("distribution"), "distribution", spec);
  const std::string name = s.text("name", "expand");
  save_rep(embed(dist, spec), ctx.out / name);
  ctx.file(name + ".csv");
  ctx.file(name + ".json");
  ctx.result->message = "wrote " + name + ".csv";
  return ExitStatus::pass;
}

// ------------------------------------------------------------------- seminorm

ExitStatus cmd_seminorm(const json& j, const Context& ctx) {
  const Section s(j, "seminorm", with(kSpecKeys, {"input", "distribution", "orders", "dual_orders"}));
  const BasisSpec spec = read_spec(s, 16);
  const GenFuncRep u = read_element(s, spec);
  const auto orders = s.integers("orders", std::vector<int>{0, 1, 2});
  const auto duals = s.integers("dual_orders", std::vector<int>{});
  CsvFile out(ctx.file("seminorm.csv"));
  out.row({"kind", "n", "value"});
  for (int n : orders) {
    if (n < 0) throw ConfigError("seminorm: orders must be >= 0");
    out.row({"seminorm", std::to_string(n), num(seminorm(u.coeffs(), n))});
  }
  for (int n : duals) {
    if (n < 1) throw ConfigError("seminorm: dual_orders must be >= 1");
    out.row({"dual", std::to_string(n), num(dual_norm(u.coeffs(), n).value)});
  }
  ctx.result->message = "wrote seminorm.csv";
  return ExitStatus::pass;
}

// ------------------------------------------------------------------ translate

ExitStatus cmd_translate(const json& j, const Context& ctx) {
  const Section s(j, "translate", with(kSpecKeys, {"input", "distribution", "shift", "name", "bound"}));
  const BasisSpec spec = read_spec(s, 32);
  ExitStatus status = ExitStatus::pass;
  std::string msg;
  if (s.has("input") || s.has("distribution")) {
    const GenFuncRep u = read_element(s, spec);
    const auto shift = read_point(s, "shift", u.dim());
    const std::string name = s.text("name", "translate");
    GenFuncRep moved = [&] {
      try {
        return translate(u, shift);
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string("translate: ") + e.what());
      }
    }();
    save_rep(moved, ctx.out / name);
    ctx.file(name + ".csv");
    ctx.file(name + ".json");
    msg = "wrote " + name + ".csv";
  }
  if (s.has("bound")) {
    const Section b(s.raw("bound"), "bound", {"function", "orders", "range", "count", "limit"});
    Evaluable phi;
    try {
      phi = named_function(b.text("function", "gauss"));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("bound: ") + e.what());
    }
    const auto orders = b.integers("orders", std::vector<int>{0, 1, 2});
    const double range = b.number("range", 5.0);
    const int count = b.integer("count", 21);
    const double limit = b.number("limit", 10.0);
    if (count < 2 || !(range > 0.0)) throw ConfigError("bound: need count >= 2 and range > 0");
    std::vector<std::vector<double>> shifts;
    for (int i = 0; i < count; ++i) {
      std::vector<double> x(static_cast<std::size_t>(spec.dim), 0.0);
      x[0] = -range + 2.0 * range * i / (count - 1);
      shifts.push_back(x);
    }
    CsvFile out(ctx.file("translation_bound.csv"));
    std::vector<std::string> head{"n"};
    for (int i = 0; i < spec.dim; ++i) head.push_back("shift_" + std::to_string(i + 1));
    head.push_back("ratio");
    out.row(head);
    double worst = 0.0;
    for (int n : orders) {
      if (n < 0) throw ConfigError("bound: orders must be >= 0");
      for (const auto& r : check_translation_bound(phi, n, shifts, spec)) {
        std::vector<std::string> cells{std::to_string(n)};
        for (double v : r.shift) cells.push_back(num(v));
        cells.push_back(num(r.ratio));
        out.row(cells);
        worst = std::max(worst, r.ratio);
      }
    }
    if (!(worst < limit)) status = ExitStatus::breach;
    msg += (msg.empty() ? "" : "; ") + std::string("max ratio ") + num(worst);
  }
  if (msg.empty()) throw ConfigError("translate: nothing to do (give input, distribution or bound)");
  ctx.result->message = msg;
  return status;
}

// ------------------------------------------------------------------ associate

RepFamily read_family(const json& j, const std::string& where, int dim) {
  const Section s(j, where, {"distribution", "shift"});
  const json dist = s.raw("distribution");
  // validate once up front so config errors surface before any work
  (void)read_distribution(dist, where + ".distribution", BasisSpec::make(dim, 1));
  const bool shifted = s.has("shift");
  const auto shift = read_point(s, "shift", dim);
  return [dist, where, shifted, shift, dim](int level) {
    const BasisSpec spec = BasisSpec::make(dim, level);
    GenFuncRep u = embed(read_distribution(dist, where + ".distribution", spec), spec);
    return shifted ? translate(u, shift) : u;
  };
}

ExitStatus cmd_associate(const json& j, const Context& ctx) {
  const Section s(j, "associate", {"command", "out", "dim", "f", "g", "levels", "tests", "tol", "expect"});
  const int dim = s.integer("dim", 1);
  if (dim < 1) throw ConfigError("associate: dim must be >= 1");
  const RepFamily f = read_family(s.raw("f"), "f", dim);
  const RepFamily g = read_family(s.raw("g"), "g", dim);
  const auto levels = s.integers("levels", std::vector<int>{8, 16, 32, 64});
  const auto tests = read_tests(s, "tests", {"gauss", "x_gauss", "cos_gauss"});
  const double tol = s.number("tol", kDefaultAssociationTolerance);
  const bool expect = s.flag("expect", true);
  AssociationReport rep;
  try {
    rep = associated(f, g, tests, levels, tol);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("associate: ") + e.what());
  }
  {
    CsvFile out(ctx.file("associate.csv"));
    out.row({"level", "test_id", "gap"});
    for (std::size_t l = 0; l < rep.levels.size(); ++l)
      for (std::size_t t = 0; t < rep.test_ids.size(); ++t)
        out.row({std::to_string(rep.levels[l]), rep.test_ids[t], num(rep.gaps[l][t])});
  }
  CsvFile v(ctx.file("associate_verdict.csv"));
  v.row({"test_id", "final_gap", "eventually_decreasing", "strictly_decreasing", "tol"});
  for (std::size_t t = 0; t < rep.test_ids.size(); ++t)
    v.row({rep.test_ids[t], num(rep.final_gap(t)), rep.eventually_decreasing[t] ? "1" : "0",
           rep.strictly_decreasing[t] ? "1" : "0", num(tol)});
  v.row({"verdict", rep.verdict ? "1" : "0", "", "", ""});
  ctx.result->message = std::string("verdict ") + (rep.verdict ? "associated" : "not associated");
  return rep.verdict == expect ? ExitStatus::pass : ExitStatus::breach;
}

// ----------------------------------------------------------------- ito-verify

std::vector<double> default_dts() {
  std::vector<double> out;
  for (int k = 6; k <= 10; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

BracketMode read_bracket(const std::string& s) {
  if (s == "model") return BracketMode::model;
  if (s == "realized") return BracketMode::realized;
  throw ConfigError("ito-verify: bracket must be model or realized");
}

EvalRule read_rule(const std::string& s) {
  if (s == "left") return EvalRule::left;
  if (s == "midpoint") return EvalRule::midpoint;
  throw ConfigError("ito-verify: rule must be left or midpoint");
}

ExitStatus cmd_ito_verify(const json& j, const Context& ctx) {
  const Section s(j, "ito-verify",
                  with(kSpecKeys, {"seed", "function", "horizon", "dt", "n_paths", "tests", "points", "bracket",
                                   "rule", "band", "path", "x0", "realized_rows", "weak"}));
  const BasisSpec spec = read_spec(s, 24, false);
  const std::uint64_t seed = s.unsigned_integer("seed", 0);
  const double horizon = s.number("horizon", 1.0);
  const auto dts = s.numbers("dt", default_dts());
  const int n_paths = s.integer("n_paths", 200);
  const auto band = read_band(s, "band", {0.3, 0.7});
  ItoOptions opt;
  opt.bracket = read_bracket(s.text("bracket", "model"));
  opt.rule = read_rule(s.text("rule", "left"));
  const std::string path_kind = s.text("path", "bm");
  if (path_kind != "bm" && path_kind != "constant") throw ConfigError("ito-verify: path must be bm or constant");
  if (!(horizon > 0.0) || n_paths < 1 || dts.size() < 2) throw ConfigError("ito-verify: need horizon > 0, n_paths >= 1 and two dt values");
  for (double dt : dts) {
    try {
      (void)TimeGrid::make(horizon, dt);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("ito-verify: ") + e.what());
    }
  }

  const std::string fname = s.text("function", "gauss");
  GenFuncRep f = [&] {
    try {
      return GenFuncRep(analyze(named_function(fname), spec));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("ito-verify: ") + e.what());
    }
  }();
  std::vector<Functional> fns;
  for (const auto& t : read_tests(s, "tests", {"gauss"})) fns.push_back(Functional::test(t.id, t.fn));
  if (s.has("points")) {
    const json& pts = s.raw("points");
    if (!pts.is_array()) throw ConfigError("ito-verify: points must be an array of points");
    for (const auto& p : pts) {
      json wrapped = json::object();
      wrapped["point"] = p;
      const Section ps(wrapped, "points", {"point"});
      fns.push_back(Functional::at_point(read_point(ps, "point", spec.dim)));
    }
  }

  CsvFile report(ctx.file("ito_report.csv"));
  report.row({"dt", "functional_id", "rms_residual", "n_paths", "seed"});
  CsvFile order(ctx.file("ito_order.csv"));
  order.row({"functional_id", "bracket", "rule", "fitted_order", "band_lo", "band_hi", "status"});
  bool ok = true;
  std::string scheme = "brownian";
  std::size_t count = static_cast<std::size_t>(n_paths);

  if (path_kind == "constant") {
    scheme = "constant";
    count = 1;
    const auto x0 = read_point(s, "x0", spec.dim);
    const double tol = s.number("tol", 1e-12);
    for (double dt : dts) {
      const Path p = constant_path(TimeGrid::make(horizon, dt), x0);
      const auto r = ito_residual(f, p, horizon, fns, opt);
      for (std::size_t i = 0; i < fns.size(); ++i) {
        report.row({num(dt), fns[i].id, num(std::abs(r[i])), "1", std::to_string(seed)});
        if (!(std::abs(r[i]) < tol)) ok = false;
      }
    }
    for (const auto& fn : fns)
      order.row({fn.id, to_string(opt.bracket), to_string(opt.rule), "nan", num(band.first), num(band.second),
                 ok ? "pass" : "breach"});
  } else {
    auto emit = [&](const ItoReport& rep, const ItoOptions& o, const std::string& suffix, bool checked) {
      for (std::size_t k = 0; k < rep.steps.size(); ++k)
        for (std::size_t i = 0; i < rep.functional_ids.size(); ++i)
          report.row({num(rep.steps[k]), rep.functional_ids[i] + suffix, num(rep.rms[k][i]),
                      std::to_string(rep.n_paths), std::to_string(rep.seed)});
      for (std::size_t i = 0; i < rep.functional_ids.size(); ++i) {
        const double p = rep.fitted_order[i];
        const bool in = p >= band.first && p <= band.second;
        std::string status = in ? "pass" : "breach";
        if (o.rule == EvalRule::midpoint && !in) status = "bias";
        if (!checked) status = "diagnostic";
        order.row({rep.functional_ids[i] + suffix, to_string(o.bracket), to_string(o.rule), num(p), num(band.first),
                   num(band.second), status});
        if (checked && !in) ok = false;
      }
    };
    emit(ito_sweep(f, horizon, dts, count, seed, fns, opt), opt, "", true);
    if (s.flag("realized_rows", false)) {
      ItoOptions r = opt;
      r.bracket = BracketMode::realized;
      emit(ito_sweep(f, horizon, dts, count, seed, fns, r), r, "@realized", false);
    }
  }

  if (s.has("weak")) {
    const Section w(s.raw("weak"), "weak", {"distribution", "levels", "n_paths", "test"});
    const BasisSpec wspec = BasisSpec::make(spec.dim, 8);
    const auto dist = read_distribution(w.has("distribution") ? w.raw("distribution") : json{{"kind", "dirac"}},
                                        "weak.distribution", wspec);
    const auto levels = w.integers("levels", std::vector<int>{8, 16, 32, 64});
    const int wpaths = w.integer("n_paths", 100);
    const std::string test = w.text("test", "gauss");
    Evaluable phi;
    try {
      phi = named_function(test);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("weak: ") + e.what());
    }
    if (levels.size() < 2 || wpaths < 1) throw ConfigError("weak: need two levels and n_paths >= 1");
    const WeakSweep ws = ustunel_sweep(dist, phi, horizon, dts, levels, static_cast<std::size_t>(wpaths), seed, opt);
    CsvFile out(ctx.file("ito_weak.csv"));
    out.row({"dt", "level", "rms_residual", "level_gap", "n_paths", "seed"});
    bool gaps_ok = true;
    for (std::size_t k = 0; k < ws.steps.size(); ++k) {
      for (std::size_t l = 0; l < ws.levels.size(); ++l)
        out.row({num(ws.steps[k]), std::to_string(ws.levels[l]), num(ws.rms[k][l]),
                 l ? num(ws.level_gaps[k][l - 1]) : "", std::to_string(ws.n_paths), std::to_string(ws.seed)});
      for (std::size_t l = 1; l < ws.level_gaps[k].size(); ++l)
        if (!(ws.level_gaps[k][l] < ws.level_gaps[k][l - 1])) gaps_ok = false;
    }
    const bool in = ws.fitted_order >= band.first && ws.fitted_order <= band.second;
    order.row({"weak:" + test, to_string(opt.bracket), to_string(opt.rule), num(ws.fitted_order), num(band.first),
               num(band.second), in && gaps_ok ? "pass" : (gaps_ok ? "breach" : "level_gaps_not_decreasing")});
    if (!(in && gaps_ok)) ok = false;
  }

  json meta{{"seed", seed}, {"scheme", scheme}, {"d", spec.dim}, {"T", horizon}, {"dt", dts}, {"count", count}};
  write_text(ctx.file("ito_meta.json"), meta.dump(2) + "\n");
  ctx.result->message = ok ? "fitted orders in band" : "criterion breach (see ito_order.csv)";
  return ok ? ExitStatus::pass : ExitStatus::breach;
}

// ----------------------------------------------------------------------- heat

ExitStatus cmd_heat(const json& j, const Context& ctx) {
  const Section s(j, "heat",
                  with(kSpecKeys, {"seed", "initial", "source", "times", "n_paths", "source_step", "tests",
                                   "pde_step", "pde_tol", "save_solution"}));
  const BasisSpec spec = read_spec(s, 48, false);
  const std::uint64_t seed = s.unsigned_integer("seed", 0);
  const auto times = s.numbers("times", std::vector<double>{0.1, 0.5, 1.0});
  const int n_paths = s.integer("n_paths", 10000);
  const double tol = s.number("tol", 1e-3);
  const auto tests = read_tests(s, "tests", {"gauss"});
  if (times.empty() || n_paths < 2) throw ConfigError("heat: need times and n_paths >= 2");
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] < 0.0 || (k && !(times[k] > times[k - 1])))
      throw ConfigError("heat: times must be non-negative and increasing");

  HeatProblem p{s.has("initial") ? read_distribution(s.raw("initial"), "initial", spec)
                                 : DistributionSpec::dirac(std::vector<double>(static_cast<std::size_t>(spec.dim), 0.0)),
                std::nullopt, times.back(), spec.dim};
  if (s.has("source")) {
    const Section src(s.raw("source"), "source", {"function"});
    try {
      p.source = GenFuncRep(analyze(named_function(src.text("function")), spec));
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("source: ") + e.what());
    }
  }
  McOptions opt;
  opt.n_paths = static_cast<std::size_t>(n_paths);
  opt.seed = seed;
  opt.source_step = s.number("source_step", 0.01);
  opt.tracked = tests;
  HeatSolution mc, sp;
  try {
    mc = solve_mc(p, spec, times, opt);
    sp = solve_spectral(p, spec, times);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("heat: ") + e.what());
  }

  bool ok = true;
  {
    CsvFile out(ctx.file("heat_report.csv"));
    out.row({"t", "functional_id", "mc_value", "mc_se", "spectral_value", "abs_gap"});
    for (std::size_t k = 0; k < times.size(); ++k)
      for (std::size_t i = 0; i < tests.size(); ++i) {
        const double m = mc.tracked_value[k][i];
        const double se = mc.tracked_se[k][i];
        const double v = pair_with(sp.reps[k].coeffs(), tests[i].fn);
        const double gap = std::abs(m - v);
        if (!(gap <= 3.0 * se + tol)) ok = false;
        out.row({num(times[k]), tests[i].id, num(m), num(se), num(v), num(gap)});
      }
  }

  const double pde_step = s.number("pde_step", 0.0);
  if (pde_step > 0.0) {
    const double pde_tol = s.number("pde_tol", 1e-4);
    CsvFile out(ctx.file("heat_pde.csv"));
    out.row({"t", "functional_id", "pde_residual"});
    for (double t : times) {
      if (t - pde_step <= 0.0) continue;
      HeatProblem q = p;
      q.horizon = t + pde_step;
      const auto tri = solve_spectral(q, spec, {t - pde_step, t, t + pde_step});
      for (const auto& tf : tests) {
        const double r = pde_residual(tri, tf.fn, t);
        out.row({num(t), tf.id, num(r)});
        if (!(r < pde_tol)) ok = false;
      }
    }
  }
  if (s.flag("save_solution", false)) {
    save_solution(sp, ctx.out / "heat_spectral");
    save_solution(mc, ctx.out / "heat_mc");
  }
  ctx.result->message = ok ? "all gaps within 3 SE + tol" : "gap breach (see heat_report.csv)";
  return ok ? ExitStatus::pass : ExitStatus::breach;
}

using Handler = ExitStatus (*)(const json&, const Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"basis-check", cmd_basis_check}, {"expand", cmd_expand},         {"seminorm", cmd_seminorm},
      {"translate", cmd_translate},     {"associate", cmd_associate},   {"ito-verify", cmd_ito_verify},
      {"heat", cmd_heat},
  };
  return h;
}

}  // namespace

std::vector<std::string> command_names() {
  return {"basis-check", "expand", "seminorm", "translate", "associate", "ito-verify", "heat"};
}

CommandResult run_command(const std::string& command, const std::string& config_json, const Overrides& ov) {
  CommandResult result;
  try {
    json cfg = config_json.empty() ? json::object() : json::parse(config_json);
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    std::string name = command;
    if (cfg.contains("command")) {
      if (!cfg["command"].is_string()) throw ConfigError("'command' must be a string");
      const std::string in_file = cfg["command"].get<std::string>();
      if (!name.empty() && name != in_file)
        throw ConfigError("config is for '" + in_file + "', not '" + name + "'");
      name = in_file;
    }
    if (name.empty()) throw ConfigError("no command given");
    const auto it = handlers().find(name);
    if (it == handlers().end()) throw ConfigError("unknown command '" + name + "'");

    if (ov.seed) cfg["seed"] = *ov.seed;
    if (ov.tol) cfg["tol"] = *ov.tol;
    if (ov.out) cfg["out"] = *ov.out;
    fs::path out = ".";
    if (cfg.contains("out")) {
      if (!cfg["out"].is_string()) throw ConfigError("'out' must be a string");
      out = cfg["out"].get<std::string>();
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());

    result.status = it->second(cfg, Context{out, &result});
  } catch (const json::exception& e) {
    result.status = ExitStatus::config_error;
    result.message = std::string("config: ") + e.what();
  } catch (const ConfigError& e) {
    result.status = ExitStatus::config_error;
    result.message = e.what();
  } catch (const IoError& e) {
    result.status = ExitStatus::config_error;
    result.message = e.what();
  } catch (const InvalidInput& e) {
    result.status = ExitStatus::config_error;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.status = ExitStatus::breach;
    result.message = e.what();
  }
  return result;
}

}  // namespace hgf

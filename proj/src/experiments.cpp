#include "boussinesq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "boussinesq/error.hpp"
#include "boussinesq/inviscid.hpp"
#include "boussinesq/kernels.hpp"
#include "boussinesq/linear.hpp"
#include "boussinesq/nonlinear.hpp"

namespace boussinesq {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Advisory: return "advisory";
  }
  return "?";
}

json CheckRecord::to_json() const {
  json j;
  j["claim"] = claim;
  j["anchor"] = anchor;
  j["predicted"] = predicted;
  j["measured"] = measured;
  j["tolerance"] = tolerance;
  j["verdict"] = std::string(to_string(verdict));
  if (verdict == Verdict::Advisory) j["within_tolerance"] = within_tolerance;
  if (!note.empty()) j["note"] = note;
  return j;
}

bool ExperimentReport::ok() const {
  return std::none_of(records.begin(), records.end(),
                      [](const CheckRecord& r) { return r.verdict == Verdict::Fail; });
}

const CheckRecord* ExperimentReport::find(std::string_view claim) const {
  for (const auto& r : records) {
    if (r.claim == claim) return &r;
  }
  return nullptr;
}

json ExperimentReport::body() const {
  json j;
  j["version"] = kVersion;
  j["config"] = config;
  j["records"] = json::array();
  for (const auto& r : records) j["records"].push_back(r.to_json());
  j["ok"] = ok();
  return j;
}

json ExperimentReport::to_json() const {
  json j = body();
  j["wall_time_s"] = wall_time;
  return j;
}

// ---------------------------------------------------------------- catalog

std::vector<CatalogEntry> list_experiments() {
  return {
      {"verify-symbols", "derivative identities of the kernel symbols, characteristic roots, zone partition",
       {"closed-form multipliers K0, K1 of the linearized viscous equation",
        "characteristic roots lambda_pm = -eps|xi|^2 +/- i|xi|sqrt((1-eps^2)|xi|^2+1)",
        "smooth partition of the frequency space into low, middle and high zones"}},
      {"kernel-decay", "Lr norms of zone-localized kernels against their predicted decay rates",
       {"Lr estimates of the low-frequency kernels", "Lr estimates of the high-frequency kernels",
        "oscillating integral estimate in the high zone"}},
      {"linear-decay", "Lm-Lq decay of the linearized solution and agreement with per-mode ODE integration",
       {"Lm-Lq estimates for solutions of the linearized Cauchy problem",
        "explicit Fourier representation of the linearized solution"}},
      {"middle-zone", "exponential decay of the middle-frequency part",
       {"exponential decay of the middle-zone kernels"}},
      {"inviscid-limit", "first- and second-order inviscid limits over an eps sweep, corrector equation",
       {"inviscid limit in L-infinity with rate eps", "second-order expansion with rate eps^2",
        "inhomogeneous inviscid equation for the second-order profile"}},
      {"wkb", "multi-scale expansion profiles, boundary-layer matching, truncation order",
       {"formal asymptotic expansion with inner and boundary-layer profiles",
        "matching of initial data between inner and boundary-layer profiles"}},
      {"nonlinear", "global small-data solution by Picard iteration and its decay",
       {"global small-data Sobolev solutions of the nonlinear equation",
        "admissibility condition on the power of the nonlinearity", "no loss of decay"}},
      {"integral-lemma", "three branches of the convolution integral of two power weights",
       {"bound of the integral of (1+t-tau)^-alpha (1+tau)^-beta over [0,t]"}},
  };
}

json catalog_json() {
  json out = json::array();
  for (const auto& e : list_experiments()) {
    out.push_back({{"id", e.id}, {"summary", e.summary}, {"anchors", e.anchors}});
  }
  return out;
}

std::vector<CatalogEntry> catalog_from_json(const json& doc) {
  std::vector<CatalogEntry> out;
  for (const auto& e : doc) {
    out.push_back({e.at("id").get<std::string>(), e.at("summary").get<std::string>(),
                   e.at("anchors").get<std::vector<std::string>>()});
  }
  return out;
}

// ---------------------------------------------------------------- config

namespace {

[[noreturn]] void invalid(const std::string& what) { throw LabError(ErrorKind::ConfigInvalid, what); }

json data_block(const std::string& kind, double width, double amplitude, double xi_max = 3.0) {
  return {{"kind", kind}, {"width", width}, {"amplitude", amplitude}, {"xi_max", xi_max},
          {"mode", {1, 0, 0}}};
}

json default_params(const std::string& id) {
  if (id == "verify-symbols") {
    return {{"eps_values", {0.1, 0.25, 0.5}}, {"samples", 200}, {"t_max", 10.0}, {"xi_max", 5.0},
            {"rel_tol", 1e-6}};
  }
  if (id == "kernel-decay") {
    return {{"dims", {1, 2}},       {"eps", 0.1},          {"kinds", {"K0", "K1"}},
            {"alphas", {0.0, 2.0}}, {"zones", {"Low", "High"}}, {"r_values", json::array({1, 2, "inf"})},
            {"t_min", 1.0},         {"t_max", 100.0},      {"times", 12},
            {"slope_tol", 0.1}};
  }
  if (id == "linear-decay") {
    return {{"dims", {1, 2}},
            {"eps", 0.25},
            {"pairs", json::array({json::array({1, 2}), json::array({1, "inf"})})},
            {"s_values", {0.0, 1.0}},
            {"data", data_block("Gaussian", 1.0, 1.0)},
            {"t_min", 5.0},
            {"t_max", 60.0},
            {"times", 12},
            {"slope_tol", 0.1},
            {"grid", {{"1", {{"N", 4096}, {"L", 200.0}}}, {"2", {{"N", 1024}, {"L", 120.0}}}}},
            {"oracle", {{"N", 4096}, {"L", 200.0}, {"times", {0.5, 1.0, 5.0}}, {"eps_values", {0.0, 0.25}},
                        {"dt", 5e-4}, {"tol", 1e-6}}}};
  }
  if (id == "middle-zone") {
    return {{"n", 1}, {"eps", 0.25}, {"kind", "K1"}, {"alpha", 0.0}, {"t_min", 1.0}, {"t_max", 20.0},
            {"times", 20}, {"max_slope", -0.05}, {"min_r2", 0.98},
            {"grid", {{"N", 4096}, {"L", 200.0}}}};
  }
  if (id == "inviscid-limit") {
    return {{"n", 1},
            {"T", 5.0},
            {"eps_sweep", {0.2, 0.1, 0.05, 0.025}},
            {"order", "both"},
            {"data", data_block("BandLimitedGaussian", 3.0, 1.0, 3.0)},
            {"grid", {{"N", 4096}, {"L", 200.0}}},
            {"rate_tol", {{"first", 0.15}, {"second", 0.2}}},
            {"defect_time", 5.0},
            {"defect_tol", 1e-6}};
  }
  if (id == "wkb") {
    return {{"n", 1},
            {"J", 3},
            {"T", 2.0},
            {"eps_sweep", {0.1, 0.05, 0.025}},
            {"data", data_block("BandLimitedGaussian", 3.0, 1.0, 3.0)},
            {"higher_amplitude", 0.5},
            {"grid", {{"N", 4096}, {"L", 200.0}}},
            {"rate_tol", 0.3},
            {"matching_tol", 1e-12}};
  }
  if (id == "nonlinear") {
    return {{"n", 1},
            {"m", 1.0},
            {"q", 2.0},
            {"s", 1.0},
            {"p", 6.0},
            {"eps", 0.5},
            {"amplitude", 1e-3},
            {"data", data_block("Gaussian", 1.0, 1.0)},
            {"T", 20.0},
            {"tol", 1e-10},
            {"max_iter", 50},
            {"iteration_limit", 15},
            {"variant", "AbsPow"},
            {"allow_inadmissible", true},
            {"nodes_per_unit", 256},
            {"grid", {{"N", 1024}, {"L", 100.0}}},
            {"slope_tol", 0.1},
            {"scaling_tol", 0.1}};
  }
  if (id == "integral-lemma") {
    return {{"cases", json::array({json::array({2.0, 2.0}), json::array({1.0, 1.0}), json::array({0.5, 0.3})})}, {"t_min", 10.0}, {"t_max", 1000.0},
            {"times", 16}, {"slope_tol", 0.05}};
  }
  invalid("unknown experiment id '" + id + "'");
}

void merge_known(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) invalid(path + " must be an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) invalid("unknown parameter '" + key + "'");
    json& slot = base[it.key()];
    // Grid blocks are keyed by dimension and may be partially overridden.
    if (slot.is_object() && it.value().is_object()) {
      merge_known(slot, it.value(), key);
    } else {
      slot = it.value();
    }
  }
}

double number(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used == s.size()) return v;
    } catch (...) {
    }
  }
  invalid("parameter '" + key + "' must be a number");
}

int integer(const json& j, const std::string& key) {
  const double v = number(j, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) invalid("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> numbers(const json& j, const std::string& key) {
  if (!j.is_array()) invalid("parameter '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

std::string text(const json& j, const std::string& key) {
  if (!j.is_string()) invalid("parameter '" + key + "' must be a string");
  return j.get<std::string>();
}

void require(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

void check_eps(double eps, const std::string& key, bool allow_zero) {
  require(eps < 1.0 && (allow_zero ? eps >= 0.0 : eps > 0.0),
          "parameter '" + key + "' must lie in " + (allow_zero ? "[0, 1)" : "(0, 1)"));
}

void check_dim(int n, const std::string& key) { require(n >= 1 && n <= 3, "'" + key + "' must be 1, 2 or 3"); }

void check_grid(const json& g, const std::string& key) {
  const int N = integer(g.at("N"), key + ".N");
  require(N >= 16 && N % 2 == 0, "'" + key + ".N' must be even and >= 16");
  require(number(g.at("L"), key + ".L") > 0.0, "'" + key + ".L' must be positive");
}

DataDescriptor descriptor(const json& d, std::uint64_t seed, const std::string& key) {
  DataDescriptor out;
  try {
    out.kind = data_kind_from_string(text(d.at("kind"), key + ".kind"));
  } catch (const LabError&) {
    invalid("'" + key + ".kind' is not a known data kind");
  }
  out.width = number(d.at("width"), key + ".width");
  out.amplitude = number(d.at("amplitude"), key + ".amplitude");
  out.xi_max = number(d.at("xi_max"), key + ".xi_max");
  const auto mode = d.at("mode");
  require(mode.is_array() && mode.size() == 3, "'" + key + ".mode' must have three entries");
  for (int i = 0; i < 3; ++i) out.mode[static_cast<std::size_t>(i)] = integer(mode[static_cast<std::size_t>(i)], key + ".mode");
  out.seed = seed;
  require(out.kind != DataDescriptor::Kind::Custom, "'" + key + ".kind' cannot be Custom in a config");
  require(out.width > 0.0, "'" + key + ".width' must be positive");
  require(out.xi_max > 0.0, "'" + key + ".xi_max' must be positive");
  return out;
}

Grid grid_from(const json& g, int n) { return Grid(n, integer(g.at("N"), "N"), number(g.at("L"), "L")); }

void validate_params(const std::string& id, const json& p, std::uint64_t seed) {
  if (id == "verify-symbols") {
    for (double e : numbers(p.at("eps_values"), "eps_values")) check_eps(e, "eps_values", true);
    require(integer(p.at("samples"), "samples") >= 10, "'samples' must be >= 10");
    require(number(p.at("t_max"), "t_max") > 0.0, "'t_max' must be positive");
    require(number(p.at("xi_max"), "xi_max") > 0.0, "'xi_max' must be positive");
    require(number(p.at("rel_tol"), "rel_tol") > 0.0, "'rel_tol' must be positive");
  } else if (id == "kernel-decay") {
    for (double n : numbers(p.at("dims"), "dims")) check_dim(static_cast<int>(n), "dims");
    check_eps(number(p.at("eps"), "eps"), "eps", false);
    for (const auto& k : p.at("kinds")) {
      const auto kind = text(k, "kinds");
      require(kind == "K0" || kind == "K1" || kind == "E0" || kind == "E1", "'kinds' entries must be K0, K1, E0 or E1");
    }
    for (const auto& z : p.at("zones")) {
      const auto zone = text(z, "zones");
      require(zone == "Low" || zone == "High", "'zones' entries must be Low or High");
    }
    for (double r : numbers(p.at("r_values"), "r_values")) require(r >= 1.0, "'r_values' must be >= 1");
    for (double a : numbers(p.at("alphas"), "alphas")) require(a >= 0.0, "'alphas' must be >= 0");
    require(number(p.at("t_min"), "t_min") >= 1.0, "'t_min' must be >= 1");
    require(number(p.at("t_max"), "t_max") > number(p.at("t_min"), "t_min"), "'t_max' must exceed 't_min'");
    require(integer(p.at("times"), "times") >= 8, "'times' must be >= 8");
  } else if (id == "linear-decay") {
    for (double n : numbers(p.at("dims"), "dims")) {
      check_dim(static_cast<int>(n), "dims");
      const std::string key = std::to_string(static_cast<int>(n));
      require(p.at("grid").contains(key), "'grid." + key + "' is missing");
      check_grid(p.at("grid").at(key), "grid." + key);
    }
    check_eps(number(p.at("eps"), "eps"), "eps", true);
    for (const auto& pair : p.at("pairs")) {
      const auto mq = numbers(pair, "pairs");
      require(mq.size() == 2 && mq[0] >= 1.0 && mq[1] >= mq[0], "'pairs' entries must be [m, q] with 1 <= m <= q");
    }
    for (double s : numbers(p.at("s_values"), "s_values")) require(s >= 0.0, "'s_values' must be >= 0");
    descriptor(p.at("data"), seed, "data");
    require(number(p.at("t_min"), "t_min") >= 1.0, "'t_min' must be >= 1");
    require(number(p.at("t_max"), "t_max") > number(p.at("t_min"), "t_min"), "'t_max' must exceed 't_min'");
    require(integer(p.at("times"), "times") >= 8, "'times' must be >= 8");
    const json& o = p.at("oracle");
    check_grid(o, "oracle");
    for (double e : numbers(o.at("eps_values"), "oracle.eps_values")) check_eps(e, "oracle.eps_values", true);
    for (double t : numbers(o.at("times"), "oracle.times")) require(t >= 0.0, "'oracle.times' must be >= 0");
    require(number(o.at("dt"), "oracle.dt") > 0.0, "'oracle.dt' must be positive");
  } else if (id == "middle-zone") {
    check_dim(integer(p.at("n"), "n"), "n");
    check_eps(number(p.at("eps"), "eps"), "eps", false);
    const auto kind = text(p.at("kind"), "kind");
    require(kind == "K0" || kind == "K1", "'kind' must be K0 or K1");
    require(number(p.at("t_max"), "t_max") > number(p.at("t_min"), "t_min"), "'t_max' must exceed 't_min'");
    require(integer(p.at("times"), "times") >= 8, "'times' must be >= 8");
    check_grid(p.at("grid"), "grid");
  } else if (id == "inviscid-limit" || id == "wkb") {
    check_dim(integer(p.at("n"), "n"), "n");
    check_grid(p.at("grid"), "grid");
    descriptor(p.at("data"), seed, "data");
    require(number(p.at("T"), "T") > 0.0, "'T' must be positive");
    const auto sweep = numbers(p.at("eps_sweep"), "eps_sweep");
    require(sweep.size() >= 3, "'eps_sweep' needs at least 3 values");
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      require(sweep[i] > 0.0 && sweep[i] <= 0.5, "'eps_sweep' values must lie in (0, 0.5]");
      require(i == 0 || sweep[i] < sweep[i - 1], "'eps_sweep' must strictly decrease");
    }
    if (id == "inviscid-limit") {
      const auto order = text(p.at("order"), "order");
      require(order == "first" || order == "second" || order == "both", "'order' must be first, second or both");
      require(number(p.at("defect_time"), "defect_time") > 0.0, "'defect_time' must be positive");
    } else {
      const int J = integer(p.at("J"), "J");
      require(J >= 1 && J <= 4, "'J' must lie in 1..4");
    }
  } else if (id == "nonlinear") {
    const int n = integer(p.at("n"), "n");
    check_dim(n, "n");
    check_grid(p.at("grid"), "grid");
    descriptor(p.at("data"), seed, "data");
    check_eps(number(p.at("eps"), "eps"), "eps", false);
    const double m = number(p.at("m"), "m");
    const double q = number(p.at("q"), "q");
    const double s = number(p.at("s"), "s");
    const double pw = number(p.at("p"), "p");
    require(pw > 1.0, "'p' must exceed 1");
    require(q > 1.0 && std::isfinite(q), "'q' must lie in (1, inf)");
    require(m >= 1.0 && m < q, "'m' must lie in [1, q)");
    require(number(p.at("T"), "T") >= 20.0, "'T' must be >= 20 for the decay fits");
    require(number(p.at("tol"), "tol") > 0.0, "'tol' must be positive");
    require(integer(p.at("max_iter"), "max_iter") >= 1, "'max_iter' must be >= 1");
    require(integer(p.at("nodes_per_unit"), "nodes_per_unit") >= 4, "'nodes_per_unit' must be >= 4");
    require(p.at("allow_inadmissible").is_boolean(), "'allow_inadmissible' must be a boolean");
    try {
      nonlinearity_from_string(text(p.at("variant"), "variant"));
    } catch (const LabError&) {
      invalid("'variant' must be AbsPow or SignedPow");
    }
    const ExponentCheck check = exponent_check(n, m, q, s, pw);
    if (!check.admissible && !p.at("allow_inadmissible").get<bool>()) {
      std::string why;
      for (const auto& v : check.violations) why += (why.empty() ? "" : "; ") + v;
      invalid("exponent p is not admissible: " + why);
    }
  } else if (id == "integral-lemma") {
    for (const auto& c : p.at("cases")) {
      const auto ab = numbers(c, "cases");
      require(ab.size() == 2 && ab[0] >= 0.0 && ab[1] >= 0.0, "'cases' entries must be [alpha, beta] >= 0");
    }
    require(number(p.at("t_max"), "t_max") >= 1e3, "'t_max' must be >= 1000");
    require(number(p.at("t_min"), "t_min") > 0.0, "'t_min' must be positive");
    require(integer(p.at("times"), "times") >= 8, "'times' must be >= 8");
  }
}

}  // namespace

json default_config(const std::string& id) {
  json params = default_params(id);
  return {{"experiment", id}, {"seed", 0}, {"output", ""}, {"params", std::move(params)}};
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) invalid("override '" + assignment + "' is not key=value");
  std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  if (key != "experiment" && key != "seed" && key != "output" && key.rfind("params.", 0) != 0) {
    key = "params." + key;
  }
  json* slot = &config;
  std::stringstream parts(key);
  std::string part;
  std::vector<std::string> path;
  while (std::getline(parts, part, '.')) path.push_back(part);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!slot->is_object()) invalid("override '" + key + "' descends into a non-object");
    slot = &(*slot)[path[i]];
    if (slot->is_null()) *slot = json::object();
  }
  (*slot)[path.back()] = value;
}

json resolve_config(const json& config) {
  if (!config.is_object()) invalid("config must be a JSON object");
  if (!config.contains("experiment")) invalid("config needs an 'experiment' id");
  const std::string id = text(config.at("experiment"), "experiment");
  json out = default_config(id);
  for (auto it = config.begin(); it != config.end(); ++it) {
    if (it.key() == "experiment") continue;
    if (it.key() == "params") {
      merge_known(out["params"], it.value(), "");
    } else if (it.key() == "seed") {
      if (!it.value().is_number_integer() || it.value().get<long long>() < 0) invalid("'seed' must be a non-negative integer");
      out["seed"] = it.value();
    } else if (it.key() == "output") {
      out["output"] = text(it.value(), "output");
    } else {
      invalid("unknown top-level key '" + it.key() + "'");
    }
  }
  validate_params(id, out.at("params"), out.at("seed").get<std::uint64_t>());
  return out;
}

// ---------------------------------------------------------------- runners

namespace {

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

json num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

std::string r_label(double r) {
  if (std::isinf(r)) return "inf";
  std::ostringstream os;
  os << r;
  return os.str();
}

struct Context {
  json params;
  std::uint64_t seed = 0;
  std::filesystem::path output;  // empty: no files
  std::vector<CheckRecord>* records = nullptr;
  std::string anchor;

  void mandatory(std::string claim, json predicted, json measured, json tolerance, bool pass,
                 std::string note = {}) const {
    CheckRecord r{std::move(claim), anchor, std::move(predicted), std::move(measured), std::move(tolerance),
                  pass ? Verdict::Pass : Verdict::Fail, pass, std::move(note)};
    records->push_back(std::move(r));
  }
  void advisory(std::string claim, json predicted, json measured, json tolerance, bool within,
                std::string note = {}) const {
    CheckRecord r{std::move(claim), anchor, std::move(predicted), std::move(measured), std::move(tolerance),
                  Verdict::Advisory, within, std::move(note)};
    records->push_back(std::move(r));
  }

  bool writes() const { return !output.empty(); }
  std::string file(const std::string& name) const { return (output / name).string(); }
};

// Runs a check body, turning library errors into a failed record.
void guarded(const Context& ctx, const std::string& claim, const std::function<void()>& body) {
  try {
    body();
  } catch (const LabError& e) {
    ctx.mandatory(claim, nullptr, nullptr, nullptr, false,
                  std::string(to_string(e.kind())) + ": " + e.what());
  } catch (const std::exception& e) {
    ctx.mandatory(claim, nullptr, nullptr, nullptr, false, std::string("error: ") + e.what());
  }
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::vector<json>>& rows) {
  std::ofstream out(path);
  if (!out) throw LabError(ErrorKind::Io, "cannot write " + path);
  out << header << '\n';
  out.precision(17);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i].is_string()) {
        out << row[i].get<std::string>();
      } else {
        out << row[i].get<double>();
      }
    }
    out << '\n';
  }
}

// Five-point central difference in t.
double time_derivative(KernelKind kind, double t, double xi, double eps, double h) {
  auto f = [&](double s) { return kernel_value(kind, s, xi, eps); };
  return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h);
}

void run_verify_symbols(const Context& ctx) {
  const json& p = ctx.params;
  const int samples = integer(p.at("samples"), "samples");
  const double t_max = number(p.at("t_max"), "t_max");
  const double xi_max = number(p.at("xi_max"), "xi_max");
  const double tol = number(p.at("rel_tol"), "rel_tol");
  for (double eps : numbers(p.at("eps_values"), "eps_values")) {
    const std::string tag = "eps=" + num(eps).dump();
    guarded(ctx, "derivative-identities " + tag, [&] {
      double worst0 = 0.0;
      double worst1 = 0.0;
      for (int a = 1; a <= samples; ++a) {
        const double xi = xi_max * a / samples;
        const double x2 = xi * xi;
        // Errors are measured against the sup of each identity along the t-row.
        double scale0 = 0.0;
        double scale1 = 0.0;
        double err0 = 0.0;
        double err1 = 0.0;
        for (int b = 1; b <= samples; ++b) {
          const double t = t_max * b / samples;
          const double h = 1e-4 / (1.0 + dispersion(xi, eps));
          const double k0 = kernel_value(KernelKind::K0, t, xi, eps);
          const double k1 = kernel_value(KernelKind::K1, t, xi, eps);
          const double rhs0 = -(x2 + x2 * x2) * k1;
          const double rhs1 = k0 - 2.0 * eps * x2 * k1;
          err0 = std::max(err0, std::abs(time_derivative(KernelKind::K0, t, xi, eps, h) - rhs0));
          err1 = std::max(err1, std::abs(time_derivative(KernelKind::K1, t, xi, eps, h) - rhs1));
          scale0 = std::max(scale0, std::abs(rhs0));
          scale1 = std::max(scale1, std::abs(rhs1));
        }
        if (scale0 > 0.0) worst0 = std::max(worst0, err0 / scale0);
        if (scale1 > 0.0) worst1 = std::max(worst1, err1 / scale1);
      }
      ctx.mandatory("dtK0 identity " + tag, "dtK0 = -(|xi|^2+|xi|^4) K1", num(worst0), tol, worst0 <= tol,
                    std::to_string(samples) + "x" + std::to_string(samples) + " (t, |xi|) samples");
      ctx.mandatory("dtK1 identity " + tag, "dtK1 = K0 - 2 eps |xi|^2 K1", num(worst1), tol, worst1 <= tol);
    });
    guarded(ctx, "characteristic-roots " + tag, [&] {
      ModelParams mp;
      mp.eps = eps;
      double worst = 0.0;
      for (int a = 1; a <= samples; ++a) {
        const double xi = xi_max * a / samples;
        const double x2 = xi * xi;
        const auto roots = characteristic_roots(xi, mp);
        for (const cplx lam : {roots.plus(), roots.minus()}) {
          const cplx res = lam * lam + 2.0 * eps * x2 * lam + x2 + x2 * x2;
          worst = std::max(worst, std::abs(res) / (x2 + x2 * x2));
        }
      }
      ctx.mandatory("characteristic-roots " + tag, "lambda^2 + 2 eps |xi|^2 lambda + |xi|^2 + |xi|^4 = 0",
                    num(worst), 1e-12, worst <= 1e-12);
    });
    guarded(ctx, "partition-of-unity " + tag, [&] {
      ModelParams mp;
      mp.eps = eps;
      const auto c = ZoneCutoffs::for_eps(eps);
      double sum_err = 0.0;
      bool ranges = true;
      bool supports = true;
      const int count = 20 * samples;
      const double top = 1.5 * c.high_outer;
      for (int a = 0; a <= count; ++a) {
        const double xi = top * a / count;
        const double lo = cutoff(Zone::Low, xi, mp);
        const double mid = cutoff(Zone::Mid, xi, mp);
        const double hi = cutoff(Zone::High, xi, mp);
        sum_err = std::max(sum_err, std::abs(lo + mid + hi - 1.0));
        for (double w : {lo, mid, hi}) ranges = ranges && w >= -1e-15 && w <= 1.0 + 1e-15;
        if (xi <= c.low_inner) supports = supports && lo == 1.0 && hi == 0.0;
        if (xi >= c.low_outer) supports = supports && lo == 0.0;
        if (xi <= c.high_inner) supports = supports && hi == 0.0;
        if (xi >= c.high_outer) supports = supports && hi == 1.0 && mid == 0.0;
      }
      ctx.mandatory("partition-of-unity " + tag, "chi_L + chi_M + chi_H = 1", num(sum_err), 1e-14,
                    sum_err <= 1e-14);
      ctx.mandatory("zone-supports " + tag, "cutoffs in [0,1] with the stated supports", ranges && supports, true,
                    ranges && supports,
                    "thresholds " + num(c.low_inner).dump() + ", " + num(c.low_outer).dump() + ", " +
                        num(c.high_inner).dump() + ", " + num(c.high_outer).dump());
    });
  }
}

std::vector<KernelKind> kinds_of(const json& j) {
  std::vector<KernelKind> out;
  for (const auto& k : j) out.push_back(kernel_kind_from_string(k.get<std::string>()));
  return out;
}

void run_kernel_decay(const Context& ctx) {
  const json& p = ctx.params;
  const double eps = number(p.at("eps"), "eps");
  const auto times = log_spaced(number(p.at("t_min"), "t_min"), number(p.at("t_max"), "t_max"),
                                static_cast<std::size_t>(integer(p.at("times"), "times")));
  const double slope_tol = number(p.at("slope_tol"), "slope_tol");
  const auto r_values = numbers(p.at("r_values"), "r_values");
  std::vector<KernelCsvRow> rows;
  for (double nd : numbers(p.at("dims"), "dims")) {
    for (KernelKind kind : kinds_of(p.at("kinds"))) {
      for (double alpha : numbers(p.at("alphas"), "alphas")) {
        for (const auto& zname : p.at("zones")) {
          MultiplierSpec spec;
          spec.kind = kind;
          spec.alpha = alpha;
          spec.zone = zone_from_string(zname.get<std::string>());
          spec.params.n = static_cast<int>(nd);
          spec.params.eps = eps;
          const std::string tag = "n=" + std::to_string(spec.params.n) + " " + std::string(to_string(kind)) +
                                  " alpha=" + num(alpha).dump() + " " + std::string(to_string(spec.zone));
          guarded(ctx, "kernel-norms " + tag, [&] {
            std::map<double, std::vector<double>> series;
            for (double t : times) {
              const KernelNorms kn = kernel_norms(spec, t);
              for (double r : r_values) {
                double v = 0.0;
                if (r == 1.0) {
                  v = kn.l1;
                } else if (r == 2.0) {
                  v = kn.l2;
                } else if (std::isinf(r)) {
                  v = kn.linf;
                } else {
                  v = kernel_norm_series(spec, r, std::vector<double>{t}).norms.front();
                }
                series[r].push_back(v);
              }
            }
            for (double r : r_values) {
              const auto& norms = series[r];
              const std::string rtag = tag + " r=" + r_label(r);
              const double trunc = kernel_rate_exponent(spec, r, Bracket::Trunc);
              const double floor = kernel_rate_exponent(spec, r, Bracket::Floor);
              const BoundCheck bound = calibrated_bound_check(times, norms, trunc);
              ctx.mandatory("kernel-bound " + rtag, {{"exponent", trunc}, {"weight", spec.zone == Zone::High ? "t" : "1+t"}},
                            {{"worst_ratio", num(bound.worst_ratio)}, {"constant", num(bound.constant)},
                             {"one_plus_t", bound.one_plus_t}},
                            "ratio <= 1.001", bound.holds);
              bool positive = std::all_of(norms.begin(), norms.end(), [](double v) { return v > 0.0; });
              if (positive && spec.zone == Zone::Low) {
                const std::size_t half = times.size() / 2;
                const std::vector<double> tt(times.begin() + static_cast<std::ptrdiff_t>(half), times.end());
                const std::vector<double> tn(norms.begin() + static_cast<std::ptrdiff_t>(half), norms.end());
                const DecayFit tail = fit_line(tt, tn, FitScale::LogOnePlusT, 4);
                ctx.advisory("kernel-tail " + rtag, {{"max_exponent", trunc}},
                             {{"slope", tail.exponent}, {"t_min", tail.t_min}}, slope_tol,
                             tail.exponent <= trunc + slope_tol,
                             "slope over the second half of the window");
              }
              if (positive) {
                const DecayFit fit = fit_line(times, norms, spec.zone == Zone::High ? FitScale::LogLog : FitScale::LogOnePlusT);
                ctx.advisory("kernel-slope " + rtag, {{"trunc", trunc}, {"floor", floor}},
                             {{"slope", fit.exponent}, {"r_squared", fit.r_squared}}, slope_tol,
                             std::abs(fit.exponent - trunc) <= slope_tol);
              } else {
                ctx.advisory("kernel-slope " + rtag, {{"trunc", trunc}, {"floor", floor}}, nullptr, slope_tol, false,
                             "norm underflows to zero; no fit");
              }
              for (std::size_t i = 0; i < times.size(); ++i) {
                const double weight = bound.one_plus_t ? 1.0 + times[i] : times[i];
                rows.push_back({spec, r, times[i], norms[i], bound.constant * std::pow(weight, trunc)});
              }
            }
          });
        }
      }
    }
  }
  if (ctx.writes()) write_kernel_csv(ctx.file("series-kernel-decay.csv"), rows);
}

void run_linear_decay(const Context& ctx) {
  const json& p = ctx.params;
  const double eps = number(p.at("eps"), "eps");
  const auto times = log_spaced(number(p.at("t_min"), "t_min"), number(p.at("t_max"), "t_max"),
                                static_cast<std::size_t>(integer(p.at("times"), "times")));
  const double slope_tol = number(p.at("slope_tol"), "slope_tol");
  const DataDescriptor d = descriptor(p.at("data"), ctx.seed, "data");

  {
    const json& o = p.at("oracle");
    const Grid grid(1, integer(o.at("N"), "oracle.N"), number(o.at("L"), "oracle.L"));
    const double dt = number(o.at("dt"), "oracle.dt");
    const double tol = number(o.at("tol"), "oracle.tol");
    const CauchyData data = CauchyData::make(grid, d, d);
    for (double e : numbers(o.at("eps_values"), "oracle.eps_values")) {
      for (double t : numbers(o.at("times"), "oracle.times")) {
        const std::string tag = "eps=" + num(e).dump() + " t=" + num(t).dump();
        guarded(ctx, "oracle-equivalence " + tag, [&] {
          ModelParams mp;
          mp.eps = e;
          const Field exact = to_physical(evolve_linear(data, t, mp).v);
          const Field ode = to_physical(ode_oracle(data, t, mp, dt).v);
          double diff = 0.0;
          for (std::size_t i = 0; i < exact.size(); ++i) diff = std::max(diff, std::abs(exact.values()[i] - ode.values()[i]));
          ctx.mandatory("oracle-equivalence " + tag, "spectral solution = per-mode RK4", num(diff), tol, diff < tol);
        });
      }
    }
  }

  std::vector<std::vector<json>> rows;
  for (double nd : numbers(p.at("dims"), "dims")) {
    const int n = static_cast<int>(nd);
    const Grid grid = grid_from(p.at("grid").at(std::to_string(n)), n);
    ModelParams mp;
    mp.n = n;
    mp.eps = eps;
    for (int index = 0; index < 2; ++index) {
      const CauchyData data = index == 0 ? CauchyData::make(grid, d, DataDescriptor::zero())
                                         : CauchyData::make(grid, DataDescriptor::zero(), d);
      for (const auto& pair : p.at("pairs")) {
        const auto mq = numbers(pair, "pairs");
        for (double s : numbers(p.at("s_values"), "s_values")) {
          const double m = mq[0];
          const double q = mq[1];
          const std::string tag = "n=" + std::to_string(n) + " v" + std::to_string(index) + " m=" + r_label(m) +
                                  " q=" + r_label(q) + " s=" + num(s).dump();
          guarded(ctx, "linear-decay " + tag, [&] {
            NormKind kind = s > 0.0 ? NormKind::SobolevDotHsq(s, q) : (std::isinf(q) ? NormKind::Linf() : NormKind::Lq(q));
            const DecayExperiment ex = decay_experiment(data, mp, kind, m, times, Quantity::V, false);
            ctx.mandatory("linear-bound " + tag, {{"exponent", ex.predicted_trunc}},
                          {{"worst_ratio", num(ex.bound.worst_ratio)}, {"constant", num(ex.bound.constant)}},
                          "ratio <= 1.001", ex.bound.holds);
            ctx.advisory("linear-slope " + tag, {{"trunc", ex.predicted_trunc}, {"floor", ex.predicted_floor}},
                         {{"slope", ex.fit.exponent}, {"r_squared", ex.fit.r_squared}}, slope_tol,
                         std::abs(ex.fit.exponent - ex.predicted_trunc) <= slope_tol);
            for (std::size_t i = 0; i < times.size(); ++i) {
              rows.push_back({json(n), json(index), json(m), num(q), json(s), json(times[i]), json(ex.norms[i])});
            }
          });
        }
      }
    }
  }
  if (ctx.writes()) {
    write_csv(ctx.file("series-linear-decay.csv"), "n,data_index,m,q,s,t,norm", rows);
  }
}

void run_middle_zone(const Context& ctx) {
  const json& p = ctx.params;
  MultiplierSpec spec;
  spec.kind = kernel_kind_from_string(text(p.at("kind"), "kind"));
  spec.alpha = number(p.at("alpha"), "alpha");
  spec.zone = Zone::Mid;
  spec.params.n = integer(p.at("n"), "n");
  spec.params.eps = number(p.at("eps"), "eps");
  const auto times = linear_spaced(number(p.at("t_min"), "t_min"), number(p.at("t_max"), "t_max"),
                                   static_cast<std::size_t>(integer(p.at("times"), "times")));
  const double max_slope = number(p.at("max_slope"), "max_slope");
  const double min_r2 = number(p.at("min_r2"), "min_r2");
  guarded(ctx, "middle-zone-kernel", [&] {
    const MiddleZoneKernelDecay mz = middle_zone_kernel_decay(spec, times);
    const bool pass = mz.fit.exponent <= max_slope && mz.fit.r_squared >= min_r2;
    ctx.mandatory("middle-zone-kernel", "log-linear decay of ||chi_M kernel||_L2",
                  {{"slope", mz.fit.exponent}, {"r_squared", mz.fit.r_squared}},
                  {{"max_slope", max_slope}, {"min_r_squared", min_r2}}, pass);
    if (ctx.writes()) {
      std::vector<std::vector<json>> rows;
      for (std::size_t i = 0; i < times.size(); ++i) rows.push_back({json(times[i]), json(mz.series.norms[i])});
      write_csv(ctx.file("series-middle-zone.csv"), "t,l2_norm", rows);
    }
  });
  guarded(ctx, "middle-zone-solution", [&] {
    const Grid grid = grid_from(p.at("grid"), spec.params.n);
    const auto d = DataDescriptor::gaussian(1.0);
    const CauchyData data = CauchyData::make(grid, d, d);
    const MiddleZoneSeries s = middle_zone_solution_decay(data, spec.params, times);
    ctx.advisory("middle-zone-solution", "log-linear decay of ||chi_M v||_L2 for Gaussian data",
                 {{"slope", s.fit.exponent}, {"r_squared", s.fit.r_squared}}, {{"max_slope", max_slope}},
                 s.fit.exponent <= max_slope && s.fit.r_squared >= min_r2);
  });
}

void run_inviscid_limit(const Context& ctx) {
  const json& p = ctx.params;
  const int n = integer(p.at("n"), "n");
  const Grid grid = grid_from(p.at("grid"), n);
  const DataDescriptor d = descriptor(p.at("data"), ctx.seed, "data");
  const CauchyData data = CauchyData::make(grid, d, d);
  const double T = number(p.at("T"), "T");
  const auto sweep = numbers(p.at("eps_sweep"), "eps_sweep");
  const std::string order = text(p.at("order"), "order");

  std::vector<double> first_gaps;
  std::vector<double> second_gaps;
  auto run_order = [&](LimitOrder lo, double target, double tol) {
    const std::string tag = std::string(to_string(lo));
    guarded(ctx, "inviscid-" + tag, [&] {
      const EpsSweep sw = eps_sweep(data, T, sweep, lo);
      (lo == LimitOrder::First ? first_gaps : second_gaps) = sw.gaps;
      ctx.mandatory("inviscid-bound " + tag, "sup gap <= C_T eps^" + num(target).dump() + " ||data||",
                    {{"ratio_growth", sw.ratio_growth}, {"C_T", sw.calibrated_C_T}, {"data_norm", sw.data_norm},
                     {"gaps", sw.gaps}},
                    {{"max_ratio_growth", kBoundSlack}}, sw.bound_dominates);
      ctx.advisory("inviscid-rate " + tag, target, {{"rate", sw.fitted_rate}, {"r_squared", sw.fit_r_squared}}, tol,
                   std::abs(sw.fitted_rate - target) <= tol, sw.data_descriptor);
    });
  };
  if (order != "second") run_order(LimitOrder::First, 1.0, number(p.at("rate_tol").at("first"), "rate_tol.first"));
  if (order != "first") {
    run_order(LimitOrder::Second, 2.0, number(p.at("rate_tol").at("second"), "rate_tol.second"));
    guarded(ctx, "corrector-defect", [&] {
      const double t = number(p.at("defect_time"), "defect_time");
      const double tol = number(p.at("defect_tol"), "defect_tol");
      const CorrectorDefect def = corrector_defect(data, t);
      ctx.mandatory("corrector-defect", "corrector solves the inhomogeneous inviscid equation",
                    {{"residual", def.residual}, {"source_sup", def.source_sup}}, tol, def.residual < tol);
    });
  }
  if (first_gaps.size() == sweep.size() && second_gaps.size() == sweep.size()) {
    bool below = true;
    for (std::size_t i = 0; i < sweep.size(); ++i) below = below && second_gaps[i] < first_gaps[i];
    ctx.mandatory("second-below-first", "second-order gap < first-order gap at every eps",
                  {{"first", first_gaps}, {"second", second_gaps}}, nullptr, below);
  }
  if (ctx.writes()) {
    std::vector<std::vector<json>> rows;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      rows.push_back({json(sweep[i]), i < first_gaps.size() ? json(first_gaps[i]) : json("nan"),
                      i < second_gaps.size() ? json(second_gaps[i]) : json("nan")});
    }
    write_csv(ctx.file("series-inviscid-limit.csv"), "eps,first_gap,second_gap", rows);
  }
}

void run_wkb(const Context& ctx) {
  const json& p = ctx.params;
  const int n = integer(p.at("n"), "n");
  const int J = integer(p.at("J"), "J");
  const Grid grid = grid_from(p.at("grid"), n);
  const DataDescriptor d = descriptor(p.at("data"), ctx.seed, "data");
  const CauchyData data = CauchyData::make(grid, d, d);
  const double T = number(p.at("T"), "T");
  const auto sweep = numbers(p.at("eps_sweep"), "eps_sweep");

  guarded(ctx, "wkb-truncation", [&] {
    std::vector<double> gaps;
    for (double eps : sweep) gaps.push_back(inner_expansion_gap(wkb_profiles(data, J, T, eps), data));
    const DecayFit fit = fit_line(sweep, gaps, FitScale::LogLog, 3);
    const double tol = number(p.at("rate_tol"), "rate_tol");
    ctx.advisory("wkb-truncation-rate", J + 1, {{"rate", fit.exponent}, {"gaps", gaps}}, tol,
                 std::abs(fit.exponent - (J + 1)) <= tol, "zero higher-order data: the boundary layers vanish");
    bool decreasing = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) decreasing = decreasing && gaps[i] < gaps[i - 1];
    ctx.mandatory("wkb-truncation-decreasing", "truncation gap decreases with eps", gaps, nullptr, decreasing);
    if (ctx.writes()) {
      std::vector<std::vector<json>> rows;
      for (std::size_t i = 0; i < sweep.size(); ++i) rows.push_back({json(sweep[i]), json(gaps[i])});
      write_csv(ctx.file("series-wkb.csv"), "eps,truncation_gap", rows);
    }
  });

  guarded(ctx, "wkb-matching", [&] {
    const double a = number(p.at("higher_amplitude"), "higher_amplitude");
    std::vector<CauchyData> higher;
    for (int j = 1; j <= J; ++j) {
      DataDescriptor h = d;
      h.amplitude = a / j;
      higher.push_back(CauchyData::make(grid, h, h));
    }
    const WkbProfileSet set = wkb_profiles(data, J, T, sweep.back(), higher);
    const double tol = number(p.at("matching_tol"), "matching_tol");
    const double defect = set.matching_defect();
    ctx.mandatory("wkb-matching", "v^{I,j}(0) + v^{L,j}(0) = 0 for j >= 1", defect, tol, defect <= tol);
    if (ctx.writes()) {
      write_field(ctx.file("fields-wkb-inner-1-T"), set.inner[1].back());
      write_field(ctx.file("fields-wkb-boundary-1-T"), set.boundary_at(1, T));
    }
  });

  guarded(ctx, "wkb-order-cap", [&] {
    bool refused = false;
    try {
      wkb_profiles(data, 5, T, sweep.back());
    } catch (const LabError& e) {
      refused = e.kind() == ErrorKind::OrderTooHigh;
    }
    ctx.mandatory("wkb-order-cap", "J = 5 raises OrderTooHigh", refused, true, refused);
  });
}

void run_nonlinear(const Context& ctx) {
  const json& p = ctx.params;
  const int n = integer(p.at("n"), "n");
  const Grid grid = grid_from(p.at("grid"), n);
  ModelParams mp;
  mp.n = n;
  mp.eps = number(p.at("eps"), "eps");
  mp.p = number(p.at("p"), "p");
  PicardOptions opt;
  opt.m = number(p.at("m"), "m");
  opt.q = number(p.at("q"), "q");
  opt.s = number(p.at("s"), "s");
  opt.tol = number(p.at("tol"), "tol");
  opt.max_iter = integer(p.at("max_iter"), "max_iter");
  opt.nodes_per_unit = integer(p.at("nodes_per_unit"), "nodes_per_unit");
  opt.variant = nonlinearity_from_string(text(p.at("variant"), "variant"));
  opt.allow_inadmissible = p.at("allow_inadmissible").get<bool>();
  const double T = number(p.at("T"), "T");
  const double amplitude = number(p.at("amplitude"), "amplitude");
  const int limit = integer(p.at("iteration_limit"), "iteration_limit");
  DataDescriptor d = descriptor(p.at("data"), ctx.seed, "data");

  guarded(ctx, "exponent-gate", [&] {
    const ExponentCheck a = exponent_check(3, 1.0, 1.01, 3.0, 4.1);
    const ExponentCheck b = exponent_check(3, 1.0, 1.01, 3.0, 4.0);
    const double rounded = std::round(a.lower_bound * 100.0) / 100.0;
    const bool ok = a.admissible && !b.admissible && rounded == 4.03 && a.lower_bound < 4.03;
    ctx.mandatory("exponent-gate p>4.03", "n=3, m=1, q=1.01, s=3 requires p > 4.03",
                  {{"lower_bound", a.lower_bound}, {"p=4.1", a.admissible}, {"p=4", b.admissible}}, "exact", ok);
    bool ok2 = true;
    json measured = json::array();
    for (double small : {0.1, 0.01, 0.001}) {
      const double q = 4.0 / small;
      const ExponentCheck at = exponent_check(3, 1.0, q, small, q);
      const ExponentCheck below = exponent_check(3, 1.0, q, small, std::nextafter(q, 0.0));
      ok2 = ok2 && at.admissible && !below.admissible;
      measured.push_back({{"eps", small}, {"p=4/eps", at.admissible}, {"p<4/eps", below.admissible}});
    }
    ctx.mandatory("exponent-gate p>=4/eps", "n=3, m=1, s=eps, q=4/eps requires p >= 4/eps", measured, "exact", ok2);
  });

  const ExponentCheck run_check = exponent_check(n, opt.m, opt.q, opt.s, mp.p);
  {
    json v = run_check.violations;
    ctx.advisory("run-admissibility", "exponent hypotheses of the global existence result",
                 {{"kappa", run_check.kappa}, {"lower_bound", num(run_check.lower_bound)}, {"violations", v}}, nullptr,
                 run_check.admissible,
                 run_check.admissible ? "" : "run proceeds with allow_inadmissible");
  }

  guarded(ctx, "picard", [&] {
    d.amplitude = amplitude;
    const CauchyData data = CauchyData::make(grid, d, d);
    const PicardResult r = picard_solve(data, mp, T, opt);
    ctx.mandatory("picard-convergence", "Picard iteration converges for small data",
                  {{"iterations", r.trace.iterations_used}, {"converged", r.trace.converged},
                   {"distances", r.trace.distances}},
                  {{"tol", opt.tol}, {"iteration_limit", limit}},
                  r.trace.converged && r.trace.iterations_used <= limit);
    ctx.mandatory("fixed-point-residual", "||u - Phi[u]||_X(T) < 10 tol", r.fixed_point_residual, 10.0 * opt.tol,
                  r.fixed_point_residual < 10.0 * opt.tol);

    const NonlinearDecay nl = decay_verify(r.u, mp, opt.m, opt.q, opt.s);
    const NonlinearDecay lin = decay_verify(r.linear, mp, opt.m, opt.q, opt.s);
    const double slope_tol = number(p.at("slope_tol"), "slope_tol");
    ctx.mandatory("no-loss-of-decay", {{"linear_slope", lin.lq_fit.exponent}},
                  {{"slope", nl.lq_fit.exponent}, {"r_squared", nl.lq_fit.r_squared}}, slope_tol,
                  std::abs(nl.lq_fit.exponent - lin.lq_fit.exponent) <= slope_tol);
    ctx.mandatory("lq-decay-bound", {{"max_exponent", nl.predicted_lq}},
                  {{"slope", nl.lq_fit.exponent}, {"r_squared", nl.lq_fit.r_squared}}, slope_tol,
                  nl.lq_fit.exponent <= nl.predicted_lq + slope_tol);
    ctx.advisory("hs-decay-bound", {{"max_exponent", nl.predicted_hs}},
                 {{"slope", nl.hs_fit.exponent}, {"r_squared", nl.hs_fit.r_squared}}, slope_tol,
                 nl.hs_fit.exponent <= nl.predicted_hs + slope_tol);

    DataDescriptor half = d;
    half.amplitude = 0.5 * amplitude;
    PicardOptions one = opt;
    one.max_iter = 1;
    const PicardResult rh = picard_solve(CauchyData::make(grid, half, half), mp, T, one);
    const double expected = std::pow(2.0, -mp.p);
    const double ratio = rh.first_correction / r.first_correction;
    const double scaling_tol = number(p.at("scaling_tol"), "scaling_tol");
    ctx.mandatory("amplitude-scaling", {{"ratio", expected}},
                  {{"ratio", num(ratio)}, {"first_correction", r.first_correction}}, scaling_tol,
                  std::abs(ratio / expected - 1.0) <= scaling_tol);

    if (ctx.writes()) {
      json manifest = {{"n", n},
                       {"m", opt.m},
                       {"q", opt.q},
                       {"s", opt.s},
                       {"p", mp.p},
                       {"eps", mp.eps},
                       {"amplitude", amplitude},
                       {"T", T},
                       {"tol", opt.tol},
                       {"iterations", r.trace.iterations_used},
                       {"converged", r.trace.converged},
                       {"xt_norm", r.xt_value},
                       {"linear_xt_norm", r.linear_xt_value},
                       {"data_norm", r.data_norm},
                       {"decay_fits",
                        {{"lq", {{"slope", nl.lq_fit.exponent}, {"r_squared", nl.lq_fit.r_squared}}},
                         {"hs", {{"slope", nl.hs_fit.exponent}, {"r_squared", nl.hs_fit.r_squared}}}}}};
      std::ofstream(ctx.file("manifest-nonlinear.json")) << manifest.dump(2) << '\n';
      std::vector<std::vector<json>> rows;
      for (std::size_t i = 0; i < nl.times.size(); ++i) {
        rows.push_back({json(nl.times[i]), json(nl.lq_norms[i]), json(nl.hs_norms[i]), json(lin.lq_norms[i])});
      }
      write_csv(ctx.file("series-nonlinear.csv"), "t,lq_norm,hs_norm,linear_lq_norm", rows);
      write_field(ctx.file("fields-nonlinear-T"), r.u.samples.back());
    }
  });
}

void run_integral_lemma(const Context& ctx) {
  const json& p = ctx.params;
  const auto times = log_spaced(number(p.at("t_min"), "t_min"), number(p.at("t_max"), "t_max"),
                                static_cast<std::size_t>(integer(p.at("times"), "times")));
  const double tol = number(p.at("slope_tol"), "slope_tol");
  std::vector<std::vector<json>> rows;
  for (const auto& c : p.at("cases")) {
    const auto ab = numbers(c, "cases");
    const std::string tag = "alpha=" + num(ab[0]).dump() + " beta=" + num(ab[1]).dump();
    guarded(ctx, "integral " + tag, [&] {
      const IntegralBoundCheck ib = integral_bound_check(ab[0], ab[1], times);
      const std::string branch(to_string(ib.branch));
      ctx.mandatory("integral-bound " + tag, {{"branch", branch}, {"exponent", ib.predicted_exponent}},
                    {{"ratio_min", ib.ratio_min}, {"ratio_max", ib.ratio_max}}, "0 < ratio_min, ratio_max / ratio_min <= 2",
                    ib.ratio_min > 0.0 && ib.ratio_max <= 2.0 * ib.ratio_min);
      ctx.advisory("integral-slope " + tag, ib.predicted_exponent,
                   {{"slope", ib.fit.exponent}, {"r_squared", ib.fit.r_squared}, {"end_slope", ib.end_slope}}, tol,
                   std::abs(ib.fit.exponent - ib.predicted_exponent) <= tol,
                   ib.branch == IntegralBranch::MaxEqualsOne ? "values divided by log(e+t) before fitting" : "");
      for (std::size_t i = 0; i < times.size(); ++i) {
        rows.push_back({json(ab[0]), json(ab[1]), json(times[i]), json(ib.values[i])});
      }
    });
  }
  if (ctx.writes()) write_csv(ctx.file("series-integral-lemma.csv"), "alpha,beta,t,value", rows);
}

}  // namespace

ExperimentReport run_experiment(const json& config) {
  const double start = now();
  ExperimentReport report;
  report.config = resolve_config(config);
  const std::string id = report.config.at("experiment").get<std::string>();

  Context ctx;
  ctx.params = report.config.at("params");
  ctx.seed = report.config.at("seed").get<std::uint64_t>();
  ctx.records = &report.records;
  for (const auto& e : list_experiments()) {
    if (e.id == id) ctx.anchor = e.anchors.front();
  }
  const std::string output = report.config.at("output").get<std::string>();
  if (!output.empty()) {
    ctx.output = output;
    std::error_code ec;
    std::filesystem::create_directories(ctx.output, ec);
    if (ec) throw LabError(ErrorKind::Io, "cannot create output directory " + output);
  }

  static const std::map<std::string, std::function<void(const Context&)>> runners = {
      {"verify-symbols", run_verify_symbols}, {"kernel-decay", run_kernel_decay},
      {"linear-decay", run_linear_decay},     {"middle-zone", run_middle_zone},
      {"inviscid-limit", run_inviscid_limit}, {"wkb", run_wkb},
      {"nonlinear", run_nonlinear},           {"integral-lemma", run_integral_lemma},
  };
  guarded(ctx, id, [&] { runners.at(id)(ctx); });
  report.wall_time = now() - start;
  if (ctx.writes()) {
    std::ofstream out(ctx.file("report.json"));
    if (!out) throw LabError(ErrorKind::Io, "cannot write report.json");
    out << report.to_json().dump(2) << '\n';
  }
  return report;
}

}  // namespace boussinesq

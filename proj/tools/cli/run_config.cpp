#include "run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "blowup/error.hpp"

namespace blowup::cli {
namespace {

using json = nlohmann::json;

[[noreturn]] void invalid(const std::string& what) { throw Error(Errc::ConfigInvalid, what); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) invalid(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) invalid("unknown key '" + k + "' in " + where);
}

template <class T>
void take(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(where + "." + key + " has the wrong type");
  }
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
  RunConfig c;
  only_keys(j, "config", {"model", "grid", "cache_dir", "output_dir", "seed", "simulate", "ineq"});
  if (j.contains("model")) {
    const json& m = j["model"];
    only_keys(m, "model", {"d", "p", "ell", "L", "eps_g", "eta", "M"});
    take(m, "d", c.model.d, "model");
    take(m, "p", c.model.p, "model");
    take(m, "ell", c.model.ell, "model");
    take(m, "L", c.model.L, "model");
    take(m, "eps_g", c.model.eps_g, "model");
    take(m, "eta", c.model.eta, "model");
    take(m, "M", c.model.M, "model");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, "grid", {"h_core", "r_core", "r_max", "tail_step"});
    take(g, "h_core", c.grid.h_core, "grid");
    take(g, "r_core", c.grid.r_core, "grid");
    take(g, "r_max", c.grid.r_max, "grid");
    take(g, "tail_step", c.grid.tail_step, "grid");
    if (!(c.grid.h_core > 0) || !(c.grid.r_core > c.grid.h_core) || !(c.grid.r_max > c.grid.r_core))
      invalid("grid needs 0 < h_core < r_core < r_max");
  }
  std::string s;
  if (j.contains("cache_dir")) {
    take(j, "cache_dir", s, "config");
    c.cache_dir = s;
  }
  if (j.contains("output_dir")) {
    take(j, "output_dir", s, "config");
    c.output_dir = s;
  }
  take(j, "seed", c.seed, "config");
  if (j.contains("simulate")) {
    const json& b = j["simulate"];
    only_keys(b, "simulate", {"kind", "amplitude", "shoot_amplitude", "s0", "nodes", "R", "t_max", "record_every",
                              "sobolev", "shoot_lo", "shoot_hi", "shoot_iterations"});
    auto& o = c.simulate;
    take(b, "kind", o.kind, "simulate");
    take(b, "amplitude", o.amplitude, "simulate");
    take(b, "shoot_amplitude", o.shoot_amplitude, "simulate");
    take(b, "s0", o.s0, "simulate");
    take(b, "nodes", o.nodes, "simulate");
    take(b, "R", o.R, "simulate");
    take(b, "t_max", o.t_max, "simulate");
    take(b, "record_every", o.record_every, "simulate");
    take(b, "sobolev", o.sobolev, "simulate");
    double x = 0;
    if (b.contains("shoot_lo")) take(b, "shoot_lo", x, "simulate"), o.shoot_lo = x;
    if (b.contains("shoot_hi")) take(b, "shoot_hi", x, "simulate"), o.shoot_hi = x;
    take(b, "shoot_iterations", o.shoot_iterations, "simulate");
    if (o.kind != "bump" && o.kind != "profile") invalid("simulate.kind must be bump or profile");
    if (o.shoot_lo.has_value() != o.shoot_hi.has_value()) invalid("simulate needs both shoot_lo and shoot_hi");
  }
  if (j.contains("ineq")) {
    const json& b = j["ineq"];
    only_keys(b, "ineq", {"which", "q", "n", "i", "constraints", "nodes", "samples"});
    auto& o = c.ineq;
    take(b, "which", o.which, "ineq");
    take(b, "q", o.q, "ineq");
    take(b, "n", o.n, "ineq");
    take(b, "i", o.i, "ineq");
    take(b, "constraints", o.constraints, "ineq");
    take(b, "nodes", o.nodes, "ineq");
    take(b, "samples", o.samples, "ineq");
    if (o.which != "hardy" && o.which != "rellich" && o.which != "coercivity")
      invalid("ineq.which must be hardy, rellich or coercivity");
  }
  return c;
}

ojson to_json(const RunConfig& c) {
  ojson j;
  j["model"] = {{"d", c.model.d}, {"p", c.model.p}, {"ell", c.model.ell}, {"L", c.model.L},
                {"eps_g", c.model.eps_g}, {"eta", c.model.eta}, {"M", c.model.M}};
  j["grid"] = {{"h_core", c.grid.h_core}, {"r_core", c.grid.r_core}, {"r_max", c.grid.r_max},
               {"tail_step", c.grid.tail_step}};
  j["cache_dir"] = c.cache_dir.string();
  j["output_dir"] = c.output_dir.string();
  j["seed"] = c.seed;
  const auto& s = c.simulate;
  j["simulate"] = {{"kind", s.kind}, {"amplitude", s.amplitude}, {"shoot_amplitude", s.shoot_amplitude},
                   {"s0", s.s0}, {"nodes", s.nodes}, {"R", s.R}, {"t_max", s.t_max},
                   {"record_every", s.record_every}, {"sobolev", s.sobolev}};
  if (s.shoot_lo) {
    j["simulate"]["shoot_lo"] = *s.shoot_lo;
    j["simulate"]["shoot_hi"] = *s.shoot_hi;
  }
  j["simulate"]["shoot_iterations"] = s.shoot_iterations;
  const auto& q = c.ineq;
  j["ineq"] = {{"which", q.which}, {"q", q.q}, {"n", q.n}, {"i", q.i},
               {"constraints", q.constraints}, {"nodes", q.nodes}, {"samples", q.samples}};
  return j;
}

std::optional<std::filesystem::path> cache_dir_from_env() {
  const char* v = std::getenv("BLOWUP_CACHE_DIR");
  if (v && *v) return std::filesystem::path(v);
  return std::nullopt;
}

}  // namespace blowup::cli

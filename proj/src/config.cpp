#include "nlc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

long long to_int(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  long long r = 0;
  try {
    r = std::stoll(v, &pos);
  } catch (...) {
    throw ConfigError(ConfigError::Kind::Type, key, line,
                      "expected integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(ConfigError::Kind::Type, key, line,
                      "expected integer, got '" + v + "'");
  return r;
}

double to_double(const std::string& v, const std::string& key, int line) {
  std::size_t pos = 0;
  double r = 0;
  try {
    r = std::stod(v, &pos);
  } catch (...) {
    throw ConfigError(ConfigError::Kind::Type, key, line,
                      "expected number, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError(ConfigError::Kind::Type, key, line,
                      "expected number, got '" + v + "'");
  return r;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(ConfigError::Kind::Type, key, line,
                    "expected boolean, got '" + v + "'");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T, class Fmt>
std::string fmt_list(const std::vector<T>& v, Fmt fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s;
}

using Setter = std::function<void(RunConfig&, const std::string& value,
                                  const std::string& key, int line)>;

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = {
      {"grid.dims",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.dims.clear();
         for (const auto& p : split_list(v)) c.dims.push_back(int(to_int(p, k, l)));
       }},
      {"grid.lengths",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.lengths.clear();
         for (const auto& p : split_list(v)) c.lengths.push_back(to_double(p, k, l));
       }},
      {"grid.bc",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         if (v == "wall") c.bc = BcMode::Wall;
         else if (v == "periodic") c.bc = BcMode::Periodic;
         else
           throw ConfigError(ConfigError::Kind::Range, k, l,
                             "expected wall|periodic, got '" + v + "'");
       }},
      {"physics.mu", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.mu = to_double(v, k, l); }},
      {"physics.lambda", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.lambda = to_double(v, k, l); }},
      {"physics.gamma", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.gamma = to_double(v, k, l); }},
      {"ic.preset", [](RunConfig& c, const std::string& v, const std::string&, int) { c.preset = v; }},
      {"ic.eps", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.eps = to_double(v, k, l); }},
      {"ic.twist_k", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.twist_k = int(to_int(v, k, l)); }},
      {"ic.director_perturb", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.director_perturb = to_double(v, k, l); }},
      {"step.dt", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.dt = to_double(v, k, l); }},
      {"step.slab_t", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.slab_t = to_double(v, k, l); }},
      {"step.t_end", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.t_end = to_double(v, k, l); }},
      {"step.contraction_target", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.contraction_target = to_double(v, k, l); }},
      {"step.picard_tol_rel", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.picard_tol_rel = to_double(v, k, l); }},
      {"step.picard_tol_abs", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.picard_tol_abs = to_double(v, k, l); }},
      {"step.max_picard", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.max_picard = int(to_int(v, k, l)); }},
      {"step.max_halvings", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.max_halvings = int(to_int(v, k, l)); }},
      {"solver.tol", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.solver_tol = to_double(v, k, l); }},
      {"solver.max_iter", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.solver_max_iter = int(to_int(v, k, l)); }},
      {"diag.renormalize", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.renormalize = to_bool(v, k, l); }},
      {"diag.skew_advection", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.skew_advection = to_bool(v, k, l); }},
      {"diag.sample_stride", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.sample_stride = int(to_int(v, k, l)); }},
      {"output.dir", [](RunConfig& c, const std::string& v, const std::string&, int) { c.output_dir = v; }},
      {"seed", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.seed = std::uint64_t(to_int(v, k, l)); }},
      {"threads", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.threads = int(to_int(v, k, l)); }},
      {"mms.case", [](RunConfig& c, const std::string& v, const std::string&, int) { c.mms_case = v; }},
      {"mms.resolutions",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.mms_resolutions.clear();
         for (const auto& p : split_list(v)) c.mms_resolutions.push_back(int(to_int(p, k, l)));
       }},
      {"mms.t_end", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.mms_t_end = to_double(v, k, l); }},
      {"mms.dt0", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.mms_dt0 = to_double(v, k, l); }},
      {"ws.fine",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.ws_fine.clear();
         for (const auto& p : split_list(v)) c.ws_fine.push_back(int(to_int(p, k, l)));
       }},
      {"ws.coarse",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.ws_coarse.clear();
         for (const auto& p : split_list(v)) c.ws_coarse.push_back(int(to_int(p, k, l)));
       }},
      {"ws.t_end", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.ws_t_end = to_double(v, k, l); }},
      {"ws.stride", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.ws_stride = int(to_int(v, k, l)); }},
      {"study.slabs",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.study_slabs.clear();
         for (const auto& p : split_list(v)) c.study_slabs.push_back(to_double(p, k, l));
       }},
      {"study.eps",
       [](RunConfig& c, const std::string& v, const std::string& k, int l) {
         c.study_eps.clear();
         for (const auto& p : split_list(v)) c.study_eps.push_back(to_double(p, k, l));
       }},
      {"study.steps_per_slab", [](RunConfig& c, const std::string& v, const std::string& k, int l) { c.study_steps_per_slab = int(to_int(v, k, l)); }},
  };
  return table;
}

void range_check(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(ConfigError::Kind::Range, field, 0, msg);
}

void validate(const RunConfig& c) {
  range_check(c.dims.size() == 2 || c.dims.size() == 3, "grid.dims",
              "need 2 or 3 axes");
  range_check(c.lengths.size() == c.dims.size(), "grid.lengths",
              "axis count must match grid.dims");
  for (int d : c.dims)
    range_check(d >= 4, "grid.dims", "each axis needs at least 4 cells");
  for (double L : c.lengths)
    range_check(L > 0.0, "grid.lengths", "lengths must be positive");
  range_check(c.mu > 0, "physics.mu", "must be positive");
  range_check(c.lambda > 0, "physics.lambda", "must be positive");
  range_check(c.gamma > 0, "physics.gamma", "must be positive");
  range_check(c.preset == "zero" || c.preset == "taylor_green" ||
                  c.preset == "twist" || c.preset == "random_smooth",
              "ic.preset", "unknown preset '" + c.preset + "'");
  range_check(c.eps > 0, "ic.eps", "must be positive");
  range_check(c.twist_k >= 1, "ic.twist_k", "must be >= 1");
  range_check(c.director_perturb >= 0, "ic.director_perturb",
              "must be non-negative");
  range_check(c.dt > 0, "step.dt", "must be positive");
  range_check(c.slab_t > 0, "step.slab_t", "must be positive");
  range_check(c.t_end >= 0, "step.t_end", "must be non-negative");
  range_check(c.contraction_target > 0 && c.contraction_target < 1,
              "step.contraction_target", "must lie in (0,1)");
  range_check(c.picard_tol_rel > 0 && c.picard_tol_rel < 1,
              "step.picard_tol_rel", "must lie in (0,1)");
  range_check(c.picard_tol_abs > 0, "step.picard_tol_abs", "must be positive");
  range_check(c.max_picard >= 1, "step.max_picard", "must be >= 1");
  range_check(c.max_halvings >= 0, "step.max_halvings", "must be >= 0");
  range_check(c.solver_tol > 0 && c.solver_tol < 1, "solver.tol",
              "must lie in (0,1)");
  range_check(c.solver_max_iter >= 1, "solver.max_iter", "must be >= 1");
  range_check(c.sample_stride >= 1, "diag.sample_stride", "must be >= 1");
  range_check(c.threads >= 0, "threads", "must be >= 0");
  range_check(c.mms_case == "steady_twist" || c.mms_case == "decaying_tg",
              "mms.case", "unknown case '" + c.mms_case + "'");
  range_check(c.mms_t_end > 0, "mms.t_end", "must be positive");
  range_check(c.mms_dt0 > 0, "mms.dt0", "must be positive");
  for (int r : c.mms_resolutions)
    range_check(r >= 4, "mms.resolutions", "each resolution needs >= 4 cells");
  range_check(c.ws_fine.size() == c.dims.size(), "ws.fine",
              "axis count must match grid.dims");
  for (int r : c.ws_fine) range_check(r >= 4, "ws.fine", "needs >= 4 cells");
  for (int r : c.ws_coarse)
    range_check(r >= 4, "ws.coarse", "needs >= 4 cells");
  range_check(c.ws_t_end > 0, "ws.t_end", "must be positive");
  range_check(c.ws_stride >= 1, "ws.stride", "must be >= 1");
  for (double s : c.study_slabs)
    range_check(s > 0, "study.slabs", "slab sizes must be positive");
  for (double e : c.study_eps)
    range_check(e >= 0, "study.eps", "amplitudes must be non-negative");
  range_check(c.study_steps_per_slab >= 1, "study.steps_per_slab",
              "must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  bool lengths_given = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigError::Kind::Type, line, line_no,
                        "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = key_table().find(key);
    if (it == key_table().end())
      throw ConfigError(ConfigError::Kind::UnknownKey, key, line_no,
                        "unknown key");
    it->second(cfg, value, key, line_no);
    if (key == "grid.lengths") lengths_given = true;
  }
  // A 3D dims with default lengths gets the default box on every axis.
  if (!lengths_given && cfg.lengths.size() != cfg.dims.size())
    cfg.lengths.assign(cfg.dims.size(), 6.283185307179586);
  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(ConfigError::Kind::Io, "config", 0,
                      "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  auto int_fmt = [](int v) { return std::to_string(v); };
  o << "grid.dims = " << fmt_list(c.dims, int_fmt) << "\n";
  o << "grid.lengths = " << fmt_list(c.lengths, fmt_double) << "\n";
  o << "grid.bc = " << (c.bc == BcMode::Wall ? "wall" : "periodic") << "\n";
  o << "physics.mu = " << fmt_double(c.mu) << "\n";
  o << "physics.lambda = " << fmt_double(c.lambda) << "\n";
  o << "physics.gamma = " << fmt_double(c.gamma) << "\n";
  o << "ic.preset = " << c.preset << "\n";
  o << "ic.eps = " << fmt_double(c.eps) << "\n";
  o << "ic.twist_k = " << c.twist_k << "\n";
  o << "ic.director_perturb = " << fmt_double(c.director_perturb) << "\n";
  o << "step.dt = " << fmt_double(c.dt) << "\n";
  o << "step.slab_t = " << fmt_double(c.slab_t) << "\n";
  o << "step.t_end = " << fmt_double(c.t_end) << "\n";
  o << "step.contraction_target = " << fmt_double(c.contraction_target) << "\n";
  o << "step.picard_tol_rel = " << fmt_double(c.picard_tol_rel) << "\n";
  o << "step.picard_tol_abs = " << fmt_double(c.picard_tol_abs) << "\n";
  o << "step.max_picard = " << c.max_picard << "\n";
  o << "step.max_halvings = " << c.max_halvings << "\n";
  o << "solver.tol = " << fmt_double(c.solver_tol) << "\n";
  o << "solver.max_iter = " << c.solver_max_iter << "\n";
  o << "diag.renormalize = " << (c.renormalize ? "true" : "false") << "\n";
  o << "diag.skew_advection = " << (c.skew_advection ? "true" : "false")
    << "\n";
  o << "diag.sample_stride = " << c.sample_stride << "\n";
  o << "output.dir = " << c.output_dir << "\n";
  o << "seed = " << c.seed << "\n";
  o << "threads = " << c.threads << "\n";
  o << "mms.case = " << c.mms_case << "\n";
  o << "mms.resolutions = " << fmt_list(c.mms_resolutions, int_fmt) << "\n";
  o << "mms.t_end = " << fmt_double(c.mms_t_end) << "\n";
  o << "mms.dt0 = " << fmt_double(c.mms_dt0) << "\n";
  o << "ws.fine = " << fmt_list(c.ws_fine, int_fmt) << "\n";
  o << "ws.coarse = " << fmt_list(c.ws_coarse, int_fmt) << "\n";
  o << "ws.t_end = " << fmt_double(c.ws_t_end) << "\n";
  o << "ws.stride = " << c.ws_stride << "\n";
  o << "study.slabs = " << fmt_list(c.study_slabs, fmt_double) << "\n";
  o << "study.eps = " << fmt_list(c.study_eps, fmt_double) << "\n";
  o << "study.steps_per_slab = " << c.study_steps_per_slab << "\n";
  return o.str();
}

std::string config_hash(const RunConfig& cfg) {
  // Hash the scientific configuration only: where the artifacts land and how
  // many workers ran must not change the hash that names the run.
  RunConfig canonical = cfg;
  canonical.output_dir = "out";
  canonical.threads = 0;
  const std::string text = serialize_config(canonical);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GridSpec grid_from(const RunConfig& cfg) {
  return make_grid(cfg.dims, cfg.lengths, cfg.bc);
}

PhysicsParams physics_from(const RunConfig& cfg) {
  return PhysicsParams{cfg.mu, cfg.lambda, cfg.gamma};
}

SlabConfig slab_from(const RunConfig& cfg) {
  SlabConfig s;
  s.dt = cfg.dt;
  s.slab_T = cfg.slab_t;
  s.contraction_target = cfg.contraction_target;
  s.picard_tol_rel = cfg.picard_tol_rel;
  s.picard_tol_abs = cfg.picard_tol_abs;
  s.max_picard = cfg.max_picard;
  s.max_halvings = cfg.max_halvings;
  s.renormalize = cfg.renormalize;
  s.momentum_advection =
      cfg.skew_advection ? AdvectionForm::Skew : AdvectionForm::Advective;
  s.phys = physics_from(cfg);
  s.poisson.tol = cfg.solver_tol;
  s.poisson.max_iter = cfg.solver_max_iter;
  return s;
}

}  // namespace nlc

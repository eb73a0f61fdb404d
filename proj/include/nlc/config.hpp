#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/grid.hpp"
#include "nlc/stepper.hpp"

namespace nlc {

/// Structured configuration error with the offending field and line.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { UnknownKey, Type, Range, Io };
  ConfigError(Kind kind, std::string field, int line, const std::string& msg)
      : std::runtime_error("config error (" + kind_name(kind) + ") at line " +
                           std::to_string(line) + ", field '" + field +
                           "': " + msg),
        kind(kind),
        field(std::move(field)),
        line(line) {}
  static std::string kind_name(Kind k) {
    switch (k) {
      case Kind::UnknownKey: return "UnknownKey";
      case Kind::Type: return "TypeError";
      case Kind::Range: return "RangeError";
      default: return "IoError";
    }
  }
  Kind kind;
  std::string field;
  int line;
};

/// Full run configuration. Defaults give a 64^2 periodic box of side 2*pi
/// with unit material constants.
struct RunConfig {
  // grid
  std::vector<int> dims{64, 64};
  std::vector<double> lengths{6.283185307179586, 6.283185307179586};
  BcMode bc = BcMode::Periodic;
  // physics
  double mu = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  // initial condition
  std::string preset = "zero";  // zero | taylor_green | twist | random_smooth
  double eps = 0.1;
  int twist_k = 1;
  double director_perturb = 0.0;
  // time stepping
  double dt = 1e-3;
  double slab_t = 1e-2;
  double t_end = 0.1;
  double contraction_target = 0.5;
  double picard_tol_rel = 1e-8;
  double picard_tol_abs = 1e-13;
  int max_picard = 30;
  int max_halvings = 16;
  // linear solver
  double solver_tol = 1e-10;
  int solver_max_iter = 20000;
  // diagnostics toggles
  bool renormalize = false;
  bool skew_advection = false;
  int sample_stride = 1;
  // run control
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 0;
  // manufactured solutions
  std::string mms_case = "decaying_tg";  // steady_twist | decaying_tg
  std::vector<int> mms_resolutions{16, 32, 64};
  double mms_t_end = 0.1;
  double mms_dt0 = 2e-3;
  // weak-strong comparison
  std::vector<int> ws_fine{128, 128};
  std::vector<int> ws_coarse{32, 64};
  double ws_t_end = 0.1;
  int ws_stride = 5;
  // Picard contraction study
  std::vector<double> study_slabs{0.1, 0.05, 0.025};
  std::vector<double> study_eps{0.01, 0.1};
  int study_steps_per_slab = 8;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses the key = value grammar ('#' comments, dotted keys). Throws
/// ConfigError naming the offending field and line.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical form: every key in fixed order, 17 significant digits.
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64 hash of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

GridSpec grid_from(const RunConfig& cfg);
SlabConfig slab_from(const RunConfig& cfg);
PhysicsParams physics_from(const RunConfig& cfg);

}  // namespace nlc

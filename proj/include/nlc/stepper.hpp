#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nlc/operators.hpp"
#include "nlc/projection.hpp"

namespace nlc {

/// Per-slab Picard settings. The iteration converges when the successive
/// difference U_bar drops below max(tol_abs, tol_rel * first difference);
/// when its ratio exceeds contraction_target on two consecutive sweeps the
/// slab (and dt with it) is halved and the slab restarts.
struct SlabConfig {
  double dt = 1e-3;
  double slab_T = 1e-2;
  double contraction_target = 0.5;
  double picard_tol_rel = 1e-8;
  double picard_tol_abs = 1e-13;
  int max_picard = 30;
  int max_halvings = 16;
  bool allow_halving = true;  // study mode turns this off
  bool renormalize = false;   // renormalize the director after each slab
  AdvectionForm momentum_advection = AdvectionForm::Advective;
  PhysicsParams phys;
  PoissonSolveConfig poisson;
};

/// One attempt at a slab size: the successive-difference trace.
struct PicardAttempt {
  double slab_T = 0;
  double dt = 0;
  std::vector<double> u_bars;  // U_bar per sweep
  std::vector<double> ratios;  // u_bars[k]/u_bars[k-1], from the 2nd sweep on
  bool accepted = false;
  bool converged = false;
};

/// Iteration trace for one slab, including rejected (halved) attempts.
struct PicardReport {
  std::vector<PicardAttempt> attempts;
  int halvings = 0;
  bool converged = false;
  double data_size_proxy = 0;  // of the slab-start state
  double slab_T_used = 0;
  double dt_used = 0;
  const PicardAttempt& final_attempt() const { return attempts.back(); }
  /// Last measured contraction ratio of the accepted attempt (0 when the
  /// slab converged before a second sweep).
  double terminal_ratio() const {
    const auto& r = attempts.back().ratios;
    return r.empty() ? 0.0 : r.back();
  }
};

/// Time-dependent body forces added to the substep right-hand sides
/// (used by the manufactured-solutions harness).
struct ExternalForcing {
  std::function<MacVectorField(double)> velocity;
  std::function<DirectorField(double)> director;
};

/// Forcings of the linearized system, frozen at the state v:
/// f_u = -(v.grad)v + lambda * elastic force(d_v),
/// f_d = -(v.grad)d_v + gamma |grad d_v|^2 d_v.
/// The elastic term uses the identity form.
std::pair<MacVectorField, DirectorField> frozen_forcing(
    const State& v, const PhysicsParams& phys,
    AdvectionForm momentum_advection = AdvectionForm::Advective);

/// Backward-Euler Stokes substep: (I - dt mu lap) u* = u_prev + dt f_u, then
/// Leray projection. Returns the divergence-free velocity and the pressure.
std::pair<MacVectorField, ScalarField> stokes_substep(
    const MacVectorField& u_prev, const MacVectorField& f_u, double dt,
    const SlabConfig& cfg, const ScalarField* pressure_guess = nullptr);

/// Backward-Euler heat substep: (I - dt gamma lap) d = d_prev + dt f_d.
DirectorField heat_substep(const DirectorField& d_prev,
                           const DirectorField& f_d, double dt,
                           const SlabConfig& cfg);

struct SlabResult {
  std::vector<State> trajectory;  // accepted iterate, slab start included
  PicardReport report;
};

/// Advances one slab by Picard iteration on the linearized system, halving
/// the slab on persistent contraction failure. Throws MaxHalvingsExceeded
/// when the halving budget runs out (unless allow_halving is off, in which
/// case the non-converged attempt is reported).
SlabResult picard_advance(const State& s0, const SlabConfig& cfg,
                          const ExternalForcing* forcing = nullptr);

using StepObserver =
    std::function<void(const State& prev, const State& next)>;

/// Chains picard_advance slabs until t_end. A slab size reduced by halving
/// carries over to subsequent slabs. The observer sees every accepted step.
std::pair<State, std::vector<PicardReport>> advance_to(
    const State& s0, double t_end, const SlabConfig& cfg,
    const StepObserver& observer = {}, const ExternalForcing* forcing = nullptr);

}  // namespace nlc

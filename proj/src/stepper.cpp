#include "nlc/stepper.hpp"

#include <cmath>

#include "nlc/diagnostics.hpp"
#include "nlc/errors.hpp"
#include "nlc/parallel.hpp"

namespace nlc {

namespace {

using detail::Array3;

void axpy_interior(double alpha, const Array3& x, Array3& y) {
  const std::int64_t n = y.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
  for (std::int64_t e = 0; e < n; ++e) {
    const auto q = y.decode(e);
    y.at(q[0], q[1], q[2]) += alpha * x.at(q[0], q[1], q[2]);
  }
}

double diff_sq_interior(const Array3& a, const Array3& b) {
  return detail::parallel_sum(a.interior_count(), [&](std::int64_t e) {
    const auto q = a.decode(e);
    const double d = a.at(q[0], q[1], q[2]) - b.at(q[0], q[1], q[2]);
    return d * d;
  });
}

// L2(u_a - u_b) + L2(d_a - d_b) + L2(grad d_a - grad d_b); the discrete
// stand-in for the paper's successive-difference norm.
double state_diff_norm(const State& a, const State& b) {
  const GridSpec& g = a.grid();
  const double vol = g.cell_volume();
  double du = 0.0;
  for (int ax = 0; ax < g.ndim; ++ax)
    du += diff_sq_interior(a.u.comp(ax), b.u.comp(ax));
  double dd = 0.0;
  for (int c = 0; c < 3; ++c) dd += diff_sq_interior(a.d.comp(c), b.d.comp(c));
  const GradTensor ta = ops::grad_tensor(a.d);
  const GradTensor tb = ops::grad_tensor(b.d);
  double dg = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int ax = 0; ax < g.ndim; ++ax)
      dg += diff_sq_interior(ta.e[c][ax], tb.e[c][ax]);
  return std::sqrt(vol * du) + std::sqrt(vol * dd) + std::sqrt(vol * dg);
}

}  // namespace

std::pair<MacVectorField, DirectorField> frozen_forcing(
    const State& v, const PhysicsParams& phys,
    AdvectionForm momentum_advection) {
  const GridSpec& g = v.grid();
  MacVectorField f_u = ops::elastic_force_identity(v.d);
  if (phys.lambda != 1.0)
    for (int a = 0; a < g.ndim; ++a) {
      auto& c = f_u.comp(a);
      const std::int64_t n = c.interior_count();
      for (std::int64_t e = 0; e < n; ++e) {
        const auto q = c.decode(e);
        c.at(q[0], q[1], q[2]) *= phys.lambda;
      }
    }
  const MacVectorField adv_u = ops::advect(v.u, v.u, momentum_advection);
  for (int a = 0; a < g.ndim; ++a) axpy_interior(-1.0, adv_u.comp(a), f_u.comp(a));

  const DirectorField adv_d = ops::advect(v.u, v.d, AdvectionForm::Advective);
  const ScalarField w = ops::grad_sq(v.d);
  DirectorField f_d(g);
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
  for (int c = 0; c < 3; ++c) {
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (g.cell_count() > 4096)
#endif
    for (int k = 0; k < nzv; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          f_d.at(c, i, j, k) =
              -adv_d.at(c, i, j, k) +
              phys.gamma * w.at(i, j, k) * v.d.at(c, i, j, k);
  }
  return {std::move(f_u), std::move(f_d)};
}

std::pair<MacVectorField, ScalarField> stokes_substep(
    const MacVectorField& u_prev, const MacVectorField& f_u, double dt,
    const SlabConfig& cfg, const ScalarField* pressure_guess) {
  const GridSpec& g = u_prev.grid();
  MacVectorField rhs = u_prev;
  for (int a = 0; a < g.ndim; ++a) axpy_interior(dt, f_u.comp(a), rhs.comp(a));
  apply_velocity_bc(rhs);
  MacVectorField u_star =
      helmholtz_solve_mac(rhs, dt * cfg.phys.mu, cfg.poisson);
  return project(u_star, dt, cfg.poisson, pressure_guess);
}

DirectorField heat_substep(const DirectorField& d_prev,
                           const DirectorField& f_d, double dt,
                           const SlabConfig& cfg) {
  const GridSpec& g = d_prev.grid();
  DirectorField rhs = d_prev;
  for (int c = 0; c < 3; ++c) axpy_interior(dt, f_d.comp(c), rhs.comp(c));
  return helmholtz_solve_director(rhs, dt * cfg.phys.gamma, cfg.poisson);
}

namespace {

// One Picard sweep: march the slab with forcings frozen at the previous
// iterate, evaluated at the new time level of each substep.
std::vector<State> picard_sweep(const State& s0,
                                const std::vector<State>& prev, double dt,
                                int steps, const SlabConfig& cfg,
                                const std::vector<MacVectorField>* ext_u,
                                const std::vector<DirectorField>* ext_d) {
  const GridSpec& g = s0.grid();
  std::vector<State> traj;
  traj.reserve(std::size_t(steps) + 1);
  traj.push_back(s0);
  for (int jstep = 0; jstep < steps; ++jstep) {
    auto [f_u, f_d] =
        frozen_forcing(prev[std::size_t(jstep) + 1], cfg.phys,
                       cfg.momentum_advection);
    if (ext_u) {
      for (int a = 0; a < g.ndim; ++a)
        axpy_interior(1.0, (*ext_u)[std::size_t(jstep)].comp(a), f_u.comp(a));
      for (int c = 0; c < 3; ++c)
        axpy_interior(1.0, (*ext_d)[std::size_t(jstep)].comp(c), f_d.comp(c));
    }
    const State& cur = traj.back();
    auto [u_next, p_next] =
        stokes_substep(cur.u, f_u, dt, cfg, &cur.p);
    DirectorField d_next = heat_substep(cur.d, f_d, dt, cfg);
    State next;
    next.u = std::move(u_next);
    next.d = std::move(d_next);
    next.p = std::move(p_next);
    next.t = s0.t + double(jstep + 1) * dt;
    apply_scalar_bc(next.p);
    traj.push_back(std::move(next));
  }
  return traj;
}

}  // namespace

SlabResult picard_advance(const State& s0, const SlabConfig& cfg,
                          const ExternalForcing* forcing) {
  PicardReport report;
  report.data_size_proxy = data_size(s0);

  double slab_T = cfg.slab_T;
  double dt = std::min(cfg.dt, slab_T);
  const double steps_ratio = slab_T / dt;

  while (true) {
    const int steps = std::max(1, int(std::llround(slab_T / dt)));
    const double dt_eff = slab_T / double(steps);

    // External forcing sampled once per attempt at the new time levels.
    std::vector<MacVectorField> ext_u;
    std::vector<DirectorField> ext_d;
    if (forcing) {
      ext_u.reserve(std::size_t(steps));
      ext_d.reserve(std::size_t(steps));
      for (int jstep = 0; jstep < steps; ++jstep) {
        const double tj = s0.t + double(jstep + 1) * dt_eff;
        ext_u.push_back(forcing->velocity(tj));
        ext_d.push_back(forcing->director(tj));
      }
    }

    PicardAttempt attempt;
    attempt.slab_T = slab_T;
    attempt.dt = dt_eff;

    // Iterate 0 is the slab-start state held constant in time.
    std::vector<State> prev(std::size_t(steps) + 1, s0);
    double u_bar_first = -1.0;
    int consecutive_bad = 0;

    for (int sweep = 0; sweep < cfg.max_picard; ++sweep) {
      std::vector<State> next =
          picard_sweep(s0, prev, dt_eff, steps, cfg,
                       forcing ? &ext_u : nullptr, forcing ? &ext_d : nullptr);
      double u_bar = 0.0;
      for (int jstep = 1; jstep <= steps; ++jstep)
        u_bar = std::max(u_bar, state_diff_norm(next[std::size_t(jstep)],
                                                prev[std::size_t(jstep)]));
      if (!attempt.u_bars.empty()) {
        const double prev_bar = attempt.u_bars.back();
        if (prev_bar > 0.0) attempt.ratios.push_back(u_bar / prev_bar);
      }
      attempt.u_bars.push_back(u_bar);
      if (u_bar_first < 0.0) u_bar_first = u_bar;

      const double threshold =
          std::max(cfg.picard_tol_abs, cfg.picard_tol_rel * u_bar_first);
      if (u_bar <= threshold) {
        attempt.converged = true;
        attempt.accepted = true;
        report.attempts.push_back(attempt);
        report.converged = true;
        report.slab_T_used = slab_T;
        report.dt_used = dt_eff;
        SlabResult result;
        result.trajectory = std::move(next);
        result.report = std::move(report);
        return result;
      }
      if (!attempt.ratios.empty() &&
          attempt.ratios.back() > cfg.contraction_target)
        ++consecutive_bad;
      else
        consecutive_bad = 0;
      if (cfg.allow_halving && consecutive_bad >= 2) break;
      prev = std::move(next);
    }

    if (!cfg.allow_halving) {
      // Study mode: report the non-contracting attempt as-is.
      attempt.accepted = true;
      report.attempts.push_back(attempt);
      report.converged = attempt.converged;
      report.slab_T_used = slab_T;
      report.dt_used = dt_eff;
      SlabResult result;
      result.trajectory = std::vector<State>{s0};
      result.report = std::move(report);
      return result;
    }

    // Both persistent ratio failure and sweep-budget exhaustion land here.
    report.attempts.push_back(attempt);
    if (report.halvings >= cfg.max_halvings)
      throw MaxHalvingsExceeded(report.halvings, report.data_size_proxy);
    ++report.halvings;
    slab_T *= 0.5;
    dt = slab_T / std::max(1.0, std::round(steps_ratio));
  }
}

std::pair<State, std::vector<PicardReport>> advance_to(
    const State& s0, double t_end, const SlabConfig& cfg,
    const StepObserver& observer, const ExternalForcing* forcing) {
  if (t_end < s0.t)
    throw std::invalid_argument("advance_to: t_end before the state time");
  std::vector<PicardReport> reports;
  State s = s0;
  double slab_T = cfg.slab_T;
  double dt = std::min(cfg.dt, slab_T);
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (t_end - s.t > eps) {
    SlabConfig local = cfg;
    const double remaining = t_end - s.t;
    local.slab_T = std::min(slab_T, remaining);
    local.dt = std::min(dt, local.slab_T);
    SlabResult slab = picard_advance(s, local, forcing);
    if (slab.report.halvings > 0) {
      // carry the halved slab size into subsequent slabs
      slab_T = slab.report.slab_T_used;
      dt = slab.report.dt_used;
    }
    if (observer)
      for (std::size_t j = 1; j < slab.trajectory.size(); ++j)
        observer(slab.trajectory[j - 1], slab.trajectory[j]);
    s = std::move(slab.trajectory.back());
    if (cfg.renormalize) renormalize_director(s.d);
    reports.push_back(std::move(slab.report));
  }
  return {std::move(s), std::move(reports)};
}

}  // namespace nlc

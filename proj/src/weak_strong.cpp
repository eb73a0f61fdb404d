#include "nlc/weak_strong.hpp"

#include <cmath>

#include "nlc/errors.hpp"
#include "nlc/presets.hpp"
#include "nlc/stepper.hpp"

namespace nlc {

namespace {

std::array<int, 3> restriction_factors(const GridSpec& fine,
                                       const GridSpec& coarse) {
  if (fine.ndim != coarse.ndim || fine.bc != coarse.bc)
    throw GridMismatch("restriction: incompatible grids");
  std::array<int, 3> r{1, 1, 1};
  for (int a = 0; a < fine.ndim; ++a) {
    if (std::abs(fine.lengths[a] - coarse.lengths[a]) >
        1e-12 * fine.lengths[a])
      throw GridMismatch("restriction: box sizes differ");
    if (fine.dims[a] % coarse.dims[a] != 0)
      throw GridMismatch("restriction: coarse dims must divide fine dims");
    r[a] = fine.dims[a] / coarse.dims[a];
  }
  return r;
}

bool is_identity(const std::array<int, 3>& r) {
  return r[0] == 1 && r[1] == 1 && r[2] == 1;
}

}  // namespace

ScalarField restrict_cell(const ScalarField& f, const GridSpec& coarse) {
  const GridSpec& fine = f.grid();
  const auto r = restriction_factors(fine, coarse);
  ScalarField out(coarse);
  const int rz = fine.ndim == 3 ? r[2] : 1;
  const double inv = 1.0 / double(r[0] * r[1] * rz);
  for (int K = 0; K < coarse.nz(); ++K)
    for (int J = 0; J < coarse.dims[1]; ++J)
      for (int I = 0; I < coarse.dims[0]; ++I) {
        double s = 0.0;
        for (int kk = 0; kk < rz; ++kk)
          for (int jj = 0; jj < r[1]; ++jj)
            for (int ii = 0; ii < r[0]; ++ii)
              s += f.at(I * r[0] + ii, J * r[1] + jj, K * rz + kk);
        out.at(I, J, K) = s * inv;
      }
  apply_scalar_bc(out);
  return out;
}

MacVectorField restrict_mac(const MacVectorField& u, const GridSpec& coarse) {
  const GridSpec& fine = u.grid();
  const auto r = restriction_factors(fine, coarse);
  MacVectorField out(coarse);
  const int rz = fine.ndim == 3 ? r[2] : 1;
  for (int a = 0; a < coarse.ndim; ++a) {
    auto& oc = out.comp(a);
    const auto& n = oc.extents();
    // transverse averaging footprint
    int rt[3] = {r[0], r[1], rz};
    rt[a] = 1;
    const double inv = 1.0 / double(rt[0] * rt[1] * rt[2]);
    for (int K = 0; K < n[2]; ++K)
      for (int J = 0; J < n[1]; ++J)
        for (int I = 0; I < n[0]; ++I) {
          const int Q[3] = {I, J, K};
          int base[3];
          for (int ax = 0; ax < 3; ++ax)
            base[ax] = ax == a ? Q[ax] * r[ax] : Q[ax] * (ax == 2 ? rz : r[ax]);
          if (fine.ndim == 2) base[2] = 0;
          double s = 0.0;
          for (int kk = 0; kk < rt[2]; ++kk)
            for (int jj = 0; jj < rt[1]; ++jj)
              for (int ii = 0; ii < rt[0]; ++ii)
                s += u.at(a, base[0] + ii, base[1] + jj, base[2] + kk);
          oc.at(I, J, K) = s * inv;
        }
  }
  apply_velocity_bc(out);
  return out;
}

DirectorField restrict_director(const DirectorField& d, const GridSpec& coarse,
                                bool renormalize) {
  const GridSpec& fine = d.grid();
  const auto r = restriction_factors(fine, coarse);
  // Equal resolutions: nothing was averaged, so nothing to renormalize.
  if (is_identity(r)) return d;
  DirectorField out(coarse, {0, 0, 0});
  const int rz = fine.ndim == 3 ? r[2] : 1;
  const double inv = 1.0 / double(r[0] * r[1] * rz);
  for (int c = 0; c < 3; ++c)
    for (int K = 0; K < coarse.nz(); ++K)
      for (int J = 0; J < coarse.dims[1]; ++J)
        for (int I = 0; I < coarse.dims[0]; ++I) {
          double s = 0.0;
          for (int kk = 0; kk < rz; ++kk)
            for (int jj = 0; jj < r[1]; ++jj)
              for (int ii = 0; ii < r[0]; ++ii)
                s += d.at(c, I * r[0] + ii, J * r[1] + jj, K * rz + kk);
          out.at(c, I, J, K) = s * inv;
        }
  if (renormalize) renormalize_director(out);
  apply_director_bc(out);
  return out;
}

State restrict_state(const State& s, const GridSpec& coarse,
                     bool renormalize_dir) {
  State out;
  out.u = restrict_mac(s.u, coarse);
  out.d = restrict_director(s.d, coarse, renormalize_dir);
  out.p = restrict_cell(s.p, coarse);
  out.t = s.t;
  return out;
}

ScalarField prolong_cell(const ScalarField& coarse, const GridSpec& fine) {
  const auto r = restriction_factors(fine, coarse.grid());
  ScalarField out(fine);
  const int rz = fine.ndim == 3 ? r[2] : 1;
  for (int k = 0; k < fine.nz(); ++k)
    for (int j = 0; j < fine.dims[1]; ++j)
      for (int i = 0; i < fine.dims[0]; ++i)
        out.at(i, j, k) = coarse.at(i / r[0], j / r[1], k / rz);
  apply_scalar_bc(out);
  return out;
}

namespace {

// Collects states at fixed sample times t0 + n * (stride * dt), robust to
// slab halvings (which keep step times aligned on dt/2^m).
struct TimeSampler {
  double t0 = 0, interval = 0, t_end = 0;
  std::vector<State> samples;
  void maybe_take(const State& s) {
    const double target = t0 + double(samples.size()) * interval;
    if (s.t >= target - 1e-9 * std::max(1.0, std::abs(target)))
      samples.push_back(s);
  }
};

}  // namespace

ComparisonSummary compare_runs(const RunConfig& cfg) {
  std::vector<double> fine_lengths(cfg.lengths.begin(), cfg.lengths.end());
  const GridSpec fine = make_grid(cfg.ws_fine, fine_lengths, cfg.bc);
  SlabConfig slab = slab_from(cfg);

  const State fine0 = make_initial_state(cfg, fine);
  const double interval = double(cfg.ws_stride) * slab.dt;

  TimeSampler fine_sampler{fine0.t, interval, cfg.ws_t_end, {}};
  fine_sampler.samples.push_back(fine0);
  auto fine_obs = [&](const State&, const State& next) {
    fine_sampler.maybe_take(next);
  };
  advance_to(fine0, cfg.ws_t_end, slab, fine_obs);

  ComparisonSummary summary;
  summary.floor = 1e-12 * (1.0 + total_energy(fine0));

  for (int cdim : cfg.ws_coarse) {
    if (cdim <= 0 || cfg.ws_fine[0] % cdim != 0)
      throw GridMismatch("ws.coarse entries must divide the fine resolution");
    std::vector<int> cdims;
    for (int a = 0; a < int(cfg.ws_fine.size()); ++a) {
      const long long scaled =
          (long long)(cfg.ws_fine[a]) * cdim / cfg.ws_fine[0];
      cdims.push_back(int(scaled));
    }
    const GridSpec coarse = make_grid(cdims, fine_lengths, cfg.bc);

    const State coarse0 = restrict_state(fine0, coarse);
    TimeSampler coarse_sampler{coarse0.t, interval, cfg.ws_t_end, {}};
    coarse_sampler.samples.push_back(coarse0);
    auto coarse_obs = [&](const State&, const State& next) {
      coarse_sampler.maybe_take(next);
    };
    advance_to(coarse0, cfg.ws_t_end, slab, coarse_obs);

    const std::size_t nsamples =
        std::min(fine_sampler.samples.size(), coarse_sampler.samples.size());
    ComparisonLevel level;
    level.grid = coarse;
    for (std::size_t m = 0; m < nsamples; ++m) {
      const State strong =
          restrict_state(fine_sampler.samples[m], coarse);
      const State& weak = coarse_sampler.samples[m];
      RelEnergyRecord rec;
      rec.t = weak.t;
      rec.rel_energy = relative_energy(weak, strong);
      rec.phi = phi_sample(strong, weak);
      level.records.push_back(rec);
      level.max_rel_energy = std::max(level.max_rel_energy, rec.rel_energy);
    }
    level.c_fit = fit_gronwall_constant(level.records, summary.floor);
    const auto env =
        gronwall_envelope(level.records, level.c_fit, summary.floor);
    for (std::size_t m = 0; m < level.records.size(); ++m)
      level.records[m].envelope = env[m];
    summary.levels.push_back(std::move(level));
  }

  for (std::size_t l = 0; l + 1 < summary.levels.size(); ++l) {
    const double num = summary.levels[l].max_rel_energy;
    const double den = summary.levels[l + 1].max_rel_energy;
    summary.convergence_factors.push_back(den > 0 ? num / den : 0.0);
  }
  return summary;
}

}  // namespace nlc

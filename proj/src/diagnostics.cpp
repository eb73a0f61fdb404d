#include "nlc/diagnostics.hpp"

#include <cmath>

#include "nlc/errors.hpp"
#include "nlc/parallel.hpp"

namespace nlc {

namespace {

// Center-interpolated velocity component a at cell (i,j,k).
double center_vel(const MacVectorField& u, int a, int i, int j, int k) {
  int fp[3] = {i, j, k};
  fp[a] += 1;
  return 0.5 * (u.at(a, i, j, k) + u.at(a, fp[0], fp[1], fp[2]));
}

template <class F>
double sum_cells(const GridSpec& g, F&& f) {
  const int nx = g.dims[0], ny = g.dims[1];
  return detail::parallel_sum(g.cell_count(), [&](std::int64_t e) {
    const int i = int(e % nx);
    const int j = int((e / nx) % ny);
    const int k = int(e / (std::int64_t(nx) * ny));
    return f(i, j, k);
  });
}

template <class F>
double max_cells(const GridSpec& g, F&& f) {
  const int nx = g.dims[0], ny = g.dims[1];
  return detail::parallel_max(g.cell_count(), [&](std::int64_t e) {
    const int i = int(e % nx);
    const int j = int((e / nx) % ny);
    const int k = int(e / (std::int64_t(nx) * ny));
    return f(i, j, k);
  });
}

}  // namespace

double total_energy(const State& s, const PhysicsParams& phys) {
  const GridSpec& g = s.grid();
  const ScalarField w = ops::grad_sq(s.d);
  const double vol = g.cell_volume();
  const double sum = sum_cells(g, [&](int i, int j, int k) {
    double u2 = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      const double c = center_vel(s.u, a, i, j, k);
      u2 += c * c;
    }
    return 0.5 * (u2 + phys.lambda * w.at(i, j, k));
  });
  return vol * sum;
}

double dissipation(const State& s, const PhysicsParams& phys) {
  const GridSpec& g = s.grid();
  const ScalarField gu2 = ops::velocity_grad_sq(s.u);
  const ScalarField w = ops::grad_sq(s.d);
  const DirectorField lap = ops::laplacian(s.d);
  const double vol = g.cell_volume();
  const double sum = sum_cells(g, [&](int i, int j, int k) {
    double heat2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double r = lap.at(c, i, j, k) + w.at(i, j, k) * s.d.at(c, i, j, k);
      heat2 += r * r;
    }
    return phys.mu * gu2.at(i, j, k) + phys.lambda * phys.gamma * heat2;
  });
  return vol * sum;
}

double energy_law_residual(const State& prev, const State& next, double dt,
                           const PhysicsParams& phys) {
  const double e0 = total_energy(prev, phys);
  const double e1 = total_energy(next, phys);
  const double d1 = dissipation(next, phys);
  return std::abs(e1 - e0 + dt * d1);
}

double unit_norm_drift(const DirectorField& d) {
  const GridSpec& g = d.grid();
  return max_cells(g, [&](int i, int j, int k) {
    const double n2 = d.at(0, i, j, k) * d.at(0, i, j, k) +
                      d.at(1, i, j, k) * d.at(1, i, j, k) +
                      d.at(2, i, j, k) * d.at(2, i, j, k);
    return std::abs(n2 - 1.0);
  });
}

double data_size(const State& s) {
  const GridSpec& g = s.grid();
  const double vol = g.cell_volume();
  const ScalarField gu2 = ops::velocity_grad_sq(s.u);
  double u2 = 0.0;
  for (int a = 0; a < g.ndim; ++a) {
    const auto& c = s.u.comp(a);
    u2 += detail::parallel_sum(c.interior_count(), [&](std::int64_t e) {
      const auto q = c.decode(e);
      const double v = c.at(q[0], q[1], q[2]);
      return v * v;
    });
  }
  const double gu2_sum = sum_cells(g, [&](int i, int j, int k) {
    return gu2.at(i, j, k);
  });
  const ScalarField w = ops::grad_sq(s.d);
  const DirectorField lap = ops::laplacian(s.d);
  const double d_sum = sum_cells(g, [&](int i, int j, int k) {
    double l2 = 0.0;
    for (int c = 0; c < 3; ++c) l2 += lap.at(c, i, j, k) * lap.at(c, i, j, k);
    return w.at(i, j, k) + l2;
  });
  // split so each part is a norm
  const double w_sum = sum_cells(g, [&](int i, int j, int k) {
    return w.at(i, j, k);
  });
  const double lap_sum = d_sum - w_sum;
  return std::sqrt(vol * (u2 + gu2_sum)) + std::sqrt(vol * (w_sum + lap_sum));
}

double grad_director_linf(const DirectorField& d) {
  const ScalarField w = ops::grad_sq(d);
  const GridSpec& g = d.grid();
  const double m = max_cells(g, [&](int i, int j, int k) {
    return w.at(i, j, k);
  });
  return std::sqrt(m);
}

double relative_energy(const State& a, const State& b) {
  if (!(a.grid() == b.grid()))
    throw GridMismatch("relative_energy: states on different grids");
  const GridSpec& g = a.grid();
  const GradTensor ta = ops::grad_tensor(a.d);
  const GradTensor tb = ops::grad_tensor(b.d);
  const double vol = g.cell_volume();
  const double sum = sum_cells(g, [&](int i, int j, int k) {
    double s = 0.0;
    for (int ax = 0; ax < g.ndim; ++ax) {
      const double du =
          center_vel(a.u, ax, i, j, k) - center_vel(b.u, ax, i, j, k);
      s += du * du;
    }
    for (int c = 0; c < 3; ++c) {
      const double dd = a.d.at(c, i, j, k) - b.d.at(c, i, j, k);
      s += dd * dd;
      for (int ax = 0; ax < g.ndim; ++ax) {
        const double dg = ta.at(c, ax, i, j, k) - tb.at(c, ax, i, j, k);
        s += dg * dg;
      }
    }
    return s;
  });
  return vol * sum;
}

double phi_sample(const State& strong, const State& weak) {
  if (!(strong.grid() == weak.grid()))
    throw GridMismatch("phi_sample: states on different grids");
  const double gd = grad_director_linf(strong.d);
  const double gd_weak = grad_director_linf(weak.d);
  const double u_inf = velocity_linf_center(strong.u);
  const DirectorField lap = ops::laplacian(strong.d);
  const GridSpec& g = strong.grid();
  const double lap_inf = max_cells(g, [&](int i, int j, int k) {
    return std::sqrt(lap.at(0, i, j, k) * lap.at(0, i, j, k) +
                     lap.at(1, i, j, k) * lap.at(1, i, j, k) +
                     lap.at(2, i, j, k) * lap.at(2, i, j, k));
  });
  return 1.0 + gd * gd * gd * gd + gd * gd + gd_weak * gd_weak +
         u_inf * u_inf + lap_inf;
}

namespace {

// trapezoid integral of phi from records[0].t to records[j].t for each j
std::vector<double> phi_integral(const std::vector<RelEnergyRecord>& r) {
  std::vector<double> integral(r.size(), 0.0);
  for (std::size_t j = 1; j < r.size(); ++j)
    integral[j] = integral[j - 1] + 0.5 * (r[j].phi + r[j - 1].phi) *
                                        (r[j].t - r[j - 1].t);
  return integral;
}

}  // namespace

double fit_gronwall_constant(const std::vector<RelEnergyRecord>& records,
                             double floor) {
  if (records.size() < 2) return 0.0;
  const double r0 = records.front().rel_energy;
  const double base = r0 + std::max(0.0, floor - r0);
  const auto integral = phi_integral(records);
  double c = 0.0;
  for (std::size_t j = 1; j < records.size(); ++j) {
    if (records[j].rel_energy <= base || integral[j] <= 0.0) continue;
    const double cj = std::log(records[j].rel_energy / base) / integral[j];
    if (cj > c) c = cj;
  }
  return c;
}

std::vector<double> gronwall_envelope(
    const std::vector<RelEnergyRecord>& records, double c_fit, double floor) {
  std::vector<double> env(records.size(), 0.0);
  if (records.empty()) return env;
  const double r0 = records.front().rel_energy;
  const double base = r0 + std::max(0.0, floor - r0);
  const auto integral = phi_integral(records);
  for (std::size_t j = 0; j < records.size(); ++j)
    env[j] = base * std::exp(c_fit * integral[j]);
  return env;
}

}  // namespace nlc

#include "nlc/presets.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nlc/operators.hpp"
#include "nlc/projection.hpp"

namespace nlc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double uniform01(std::mt19937_64& rng) {
  // fully specified mapping, stable across standard libraries
  return double(rng() >> 11) * 0x1.0p-53;
}

// Low-mode trigonometric series with smooth spectral decay; periodic on the
// box by construction.
struct TrigSeries {
  struct Mode {
    double kx, ky, kz, amp, phase;
  };
  std::vector<Mode> modes;

  static TrigSeries random(std::mt19937_64& rng, const GridSpec& g,
                           double amplitude) {
    static const int base[6][3] = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                                   {1, -1, 0}, {2, 1, 0}, {1, 2, 0}};
    TrigSeries s;
    for (const auto& m : base) {
      Mode mode;
      mode.kx = kTwoPi * m[0] / g.lengths[0];
      mode.ky = kTwoPi * m[1] / g.lengths[1];
      mode.kz = g.ndim == 3 ? kTwoPi * m[2] / g.lengths[2] : 0.0;
      const double knorm2 = double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
      mode.amp = amplitude * (2.0 * uniform01(rng) - 1.0) / (knorm2 * knorm2);
      mode.phase = kTwoPi * uniform01(rng);
      s.modes.push_back(mode);
    }
    return s;
  }

  double value(double x, double y, double z) const {
    double v = 0.0;
    for (const auto& m : modes)
      v += m.amp * std::cos(m.kx * x + m.ky * y + m.kz * z + m.phase);
    return v;
  }
  double dx(double x, double y, double z) const {
    double v = 0.0;
    for (const auto& m : modes)
      v -= m.amp * m.kx * std::sin(m.kx * x + m.ky * y + m.kz * z + m.phase);
    return v;
  }
  double dy(double x, double y, double z) const {
    double v = 0.0;
    for (const auto& m : modes)
      v -= m.amp * m.ky * std::sin(m.kx * x + m.ky * y + m.kz * z + m.phase);
    return v;
  }
  double dz(double x, double y, double z) const {
    double v = 0.0;
    for (const auto& m : modes)
      v -= m.amp * m.kz * std::sin(m.kx * x + m.ky * y + m.kz * z + m.phase);
    return v;
  }
};

template <class F>
void sample_faces(MacVectorField& u, int axis, F&& f) {
  const GridSpec& g = u.grid();
  auto& c = u.comp(axis);
  const auto& n = c.extents();
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) {
        const int q[3] = {i, j, k};
        double x[3] = {0, 0, 0};
        for (int ax = 0; ax < g.ndim; ++ax)
          x[ax] = ax == axis ? g.face_coord(ax, q[ax])
                             : g.cell_center(ax, q[ax]);
        c.at(i, j, k) = f(x[0], x[1], x[2]);
      }
}

template <class F>
void sample_director_angles(DirectorField& d, F&& angles) {
  const GridSpec& g = d.grid();
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const double x = g.cell_center(0, i);
        const double y = g.cell_center(1, j);
        const double z = g.ndim == 3 ? g.cell_center(2, k) : 0.0;
        const auto [alpha, beta] = angles(x, y, z);
        d.at(0, i, j, k) = std::sin(alpha) * std::cos(beta);
        d.at(1, i, j, k) = std::sin(alpha) * std::sin(beta);
        d.at(2, i, j, k) = std::cos(alpha);
      }
}

}  // namespace

State make_initial_state(const RunConfig& cfg, const GridSpec& g) {
  State s(g);
  const double kx = kTwoPi / g.lengths[0];
  const double ky = kTwoPi / g.lengths[1];
  const double kz = g.ndim == 3 ? kTwoPi / g.lengths[2] : 0.0;

  if (cfg.preset == "zero") {
    // velocity and director already at the zero / north-pole state
    if (cfg.director_perturb != 0.0)
      sample_director_angles(s.d, [&](double x, double y, double z) {
        const double a = cfg.director_perturb * std::cos(kx * x) *
                         std::cos(ky * y) *
                         (g.ndim == 3 ? std::cos(kz * z) : 1.0);
        return std::pair<double, double>(a, 0.0);
      });
  } else if (cfg.preset == "taylor_green") {
    if (std::abs(g.lengths[0] - g.lengths[1]) > 1e-12 * g.lengths[0])
      throw std::invalid_argument(
          "taylor_green preset needs equal box lengths on axes 0 and 1");
    const double eps = cfg.eps;
    sample_faces(s.u, 0, [&](double x, double y, double z) {
      return eps * std::sin(kx * x) * std::cos(ky * y) *
             (g.ndim == 3 ? std::cos(kz * z) : 1.0);
    });
    sample_faces(s.u, 1, [&](double x, double y, double z) {
      return -eps * std::cos(kx * x) * std::sin(ky * y) *
             (g.ndim == 3 ? std::cos(kz * z) : 1.0);
    });
    if (g.ndim == 3)
      sample_faces(s.u, 2, [&](double, double, double) { return 0.0; });
    sample_director_angles(s.d, [&](double x, double y, double z) {
      const double a = cfg.director_perturb * std::cos(kx * x) *
                       std::cos(ky * y) *
                       (g.ndim == 3 ? std::cos(kz * z) : 1.0);
      return std::pair<double, double>(a, 0.0);
    });
  } else if (cfg.preset == "twist") {
    const double kw = kTwoPi * cfg.twist_k / g.lengths[0];
    sample_director_angles(s.d, [&](double x, double, double) {
      return std::pair<double, double>(kw * x, 0.0);
    });
  } else if (cfg.preset == "random_smooth") {
    std::mt19937_64 rng(cfg.seed);
    if (g.ndim == 2) {
      const TrigSeries psi = TrigSeries::random(rng, g, cfg.eps);
      sample_faces(s.u, 0, [&](double x, double y, double z) {
        return psi.dy(x, y, z);
      });
      sample_faces(s.u, 1, [&](double x, double y, double z) {
        return -psi.dx(x, y, z);
      });
    } else {
      // u = curl A for a random smooth vector potential
      const TrigSeries a0 = TrigSeries::random(rng, g, cfg.eps);
      const TrigSeries a1 = TrigSeries::random(rng, g, cfg.eps);
      const TrigSeries a2 = TrigSeries::random(rng, g, cfg.eps);
      sample_faces(s.u, 0, [&](double x, double y, double z) {
        return a2.dy(x, y, z) - a1.dz(x, y, z);
      });
      sample_faces(s.u, 1, [&](double x, double y, double z) {
        return a0.dz(x, y, z) - a2.dx(x, y, z);
      });
      sample_faces(s.u, 2, [&](double x, double y, double z) {
        return a1.dx(x, y, z) - a0.dy(x, y, z);
      });
    }
    const TrigSeries alpha_s = TrigSeries::random(rng, g, cfg.eps * kTwoPi);
    const TrigSeries beta_s = TrigSeries::random(rng, g, cfg.eps * kTwoPi);
    sample_director_angles(s.d, [&](double x, double y, double z) {
      return std::pair<double, double>(alpha_s.value(x, y, z),
                                       beta_s.value(x, y, z));
    });
  } else {
    throw std::invalid_argument("unknown preset '" + cfg.preset + "'");
  }

  apply_state_bc(s);
  // Discrete divergence-free initial velocity, per the documented
  // compatibility convention.
  PoissonSolveConfig pcfg;
  pcfg.tol = cfg.solver_tol;
  pcfg.max_iter = cfg.solver_max_iter;
  if (field_linf(s.u) > 0.0) {
    auto [u_proj, phi] = project(s.u, 1.0, pcfg);
    s.u = std::move(u_proj);
    (void)phi;
  }
  apply_state_bc(s);
  return s;
}

}  // namespace nlc

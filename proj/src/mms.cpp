#include "nlc/mms.hpp"

#include <cmath>
#include <stdexcept>

#include "nlc/parallel.hpp"
#include "nlc/stepper.hpp"

namespace nlc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

double ManufacturedCase::alpha(double x, double y, double t) const {
  if (name == "steady_twist") return kx * twist_k * x;
  const double a = alpha0 * std::exp(-2.0 * phys.gamma * kx * kx * t);
  return a * std::cos(kx * x) * std::cos(ky * y);
}

double ManufacturedCase::alpha_x(double x, double y, double t) const {
  if (name == "steady_twist") return kx * twist_k;
  const double a = alpha0 * std::exp(-2.0 * phys.gamma * kx * kx * t);
  return -a * kx * std::sin(kx * x) * std::cos(ky * y);
}

double ManufacturedCase::alpha_y(double x, double y, double t) const {
  if (name == "steady_twist") return 0.0;
  const double a = alpha0 * std::exp(-2.0 * phys.gamma * kx * kx * t);
  return -a * ky * std::cos(kx * x) * std::sin(ky * y);
}

double ManufacturedCase::alpha_lap(double x, double y, double t) const {
  if (name == "steady_twist") return 0.0;
  return -(kx * kx + ky * ky) * alpha(x, y, t);
}

double ManufacturedCase::alpha_t(double x, double y, double t) const {
  if (name == "steady_twist") return 0.0;
  return -2.0 * phys.gamma * kx * kx * alpha(x, y, t);
}

double ManufacturedCase::u_exact(int axis, double x, double y,
                                 double t) const {
  if (name == "steady_twist") return 0.0;
  const double decay = eps * std::exp(-2.0 * phys.mu * kx * kx * t);
  if (axis == 0) return decay * std::sin(kx * x) * std::cos(ky * y);
  return -decay * std::cos(kx * x) * std::sin(ky * y);
}

double ManufacturedCase::p_exact(double x, double y, double t) const {
  if (name == "steady_twist") return 0.0;
  const double decay =
      0.25 * eps * eps * std::exp(-4.0 * phys.mu * kx * kx * t);
  return decay * (std::cos(2.0 * kx * x) + std::cos(2.0 * ky * y));
}

std::array<double, 3> ManufacturedCase::d_exact(double x, double y,
                                                double t) const {
  const double a = alpha(x, y, t);
  return {std::sin(a), 0.0, std::cos(a)};
}

double ManufacturedCase::g_u(int axis, double x, double y, double t) const {
  // u*_t + u*.grad u* - mu lap u* + grad P* cancels by construction; what
  // remains is the elastic stress of the angle field:
  // lambda (lap a * grad a + grad(|grad a|^2 / 2)).
  if (name == "steady_twist") return 0.0;
  const double ax_ = alpha_x(x, y, t);
  const double ay_ = alpha_y(x, y, t);
  const double lap = alpha_lap(x, y, t);
  const double a = alpha0 * std::exp(-2.0 * phys.gamma * kx * kx * t);
  // grad(|grad a|^2 / 2) for a = A cos(kx x) cos(ky y)
  const double gx = a * a * kx *
                    (kx * kx * std::sin(kx * x) * std::cos(kx * x) *
                         std::cos(ky * y) * std::cos(ky * y) -
                     ky * ky * std::cos(kx * x) * std::sin(kx * x) *
                         std::sin(ky * y) * std::sin(ky * y));
  const double gy = a * a * ky *
                    (ky * ky * std::cos(ky * y) * std::sin(ky * y) *
                         std::cos(kx * x) * std::cos(kx * x) -
                     kx * kx * std::sin(ky * y) * std::cos(ky * y) *
                         std::sin(kx * x) * std::sin(kx * x));
  const double grad_half = axis == 0 ? gx : gy;
  const double grad_a = axis == 0 ? ax_ : ay_;
  return phys.lambda * (lap * grad_a + grad_half);
}

std::array<double, 3> ManufacturedCase::g_d(double x, double y,
                                            double t) const {
  // g_d = (a_t + u*.grad a - gamma lap a) (cos a, 0, -sin a); for both cases
  // a_t = gamma lap a, so only the transport term remains.
  if (name == "steady_twist") return {0.0, 0.0, 0.0};
  const double transport = u_exact(0, x, y, t) * alpha_x(x, y, t) +
                           u_exact(1, x, y, t) * alpha_y(x, y, t);
  const double a = alpha(x, y, t);
  return {transport * std::cos(a), 0.0, -transport * std::sin(a)};
}

ManufacturedCase make_manufactured_case(const std::string& name,
                                        const GridSpec& g, double eps,
                                        double alpha0,
                                        const PhysicsParams& phys) {
  if (g.ndim != 2)
    throw std::invalid_argument("manufactured cases are two-dimensional");
  if (g.bc != BcMode::Periodic)
    throw std::invalid_argument("manufactured cases need a periodic box");
  if (std::abs(g.lengths[0] - g.lengths[1]) > 1e-12 * g.lengths[0])
    throw std::invalid_argument("manufactured cases need a square box");
  ManufacturedCase mc;
  mc.name = name;
  mc.eps = eps;
  mc.alpha0 = alpha0;
  mc.kx = kTwoPi / g.lengths[0];
  mc.ky = kTwoPi / g.lengths[1];
  mc.phys = phys;
  if (name != "steady_twist" && name != "decaying_tg")
    throw std::invalid_argument("unknown manufactured case '" + name + "'");
  return mc;
}

MacVectorField sample_forcing_u(const ManufacturedCase& mc, const GridSpec& g,
                                double t) {
  MacVectorField f(g);
  for (int a = 0; a < g.ndim; ++a) {
    auto& c = f.comp(a);
    const auto& n = c.extents();
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j)
        for (int i = 0; i < n[0]; ++i) {
          const double x =
              a == 0 ? g.face_coord(0, i) : g.cell_center(0, i);
          const double y =
              a == 1 ? g.face_coord(1, j) : g.cell_center(1, j);
          c.at(i, j, k) = mc.g_u(a, x, y, t);
        }
  }
  apply_velocity_bc(f);
  return f;
}

DirectorField sample_forcing_d(const ManufacturedCase& mc, const GridSpec& g,
                               double t) {
  DirectorField f(g, {0, 0, 0});
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const auto v = mc.g_d(g.cell_center(0, i), g.cell_center(1, j), t);
        for (int c = 0; c < 3; ++c) f.at(c, i, j, k) = v[c];
      }
  apply_director_bc(f);
  return f;
}

State sample_exact_state(const ManufacturedCase& mc, const GridSpec& g,
                         double t) {
  State s(g, {0, 0, 0});
  s.t = t;
  for (int a = 0; a < g.ndim; ++a) {
    auto& c = s.u.comp(a);
    const auto& n = c.extents();
    for (int k = 0; k < n[2]; ++k)
      for (int j = 0; j < n[1]; ++j)
        for (int i = 0; i < n[0]; ++i) {
          const double x = a == 0 ? g.face_coord(0, i) : g.cell_center(0, i);
          const double y = a == 1 ? g.face_coord(1, j) : g.cell_center(1, j);
          c.at(i, j, k) = mc.u_exact(a, x, y, t);
        }
  }
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        const auto v =
            mc.d_exact(g.cell_center(0, i), g.cell_center(1, j), t);
        for (int c = 0; c < 3; ++c) s.d.at(c, i, j, k) = v[c];
        s.p.at(i, j, k) =
            mc.p_exact(g.cell_center(0, i), g.cell_center(1, j), t);
      }
  apply_state_bc(s);
  return s;
}

namespace {

double face_l2_error(const MacVectorField& u, const MacVectorField& exact) {
  const GridSpec& g = u.grid();
  double s = 0.0;
  for (int a = 0; a < g.ndim; ++a) {
    const auto& ca = u.comp(a);
    const auto& cb = exact.comp(a);
    s += detail::parallel_sum(ca.interior_count(), [&](std::int64_t e) {
      const auto q = ca.decode(e);
      const double d = ca.at(q[0], q[1], q[2]) - cb.at(q[0], q[1], q[2]);
      return d * d;
    });
  }
  return std::sqrt(g.cell_volume() * s);
}

double director_l2_error(const DirectorField& d, const DirectorField& exact) {
  const GridSpec& g = d.grid();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& ca = d.comp(c);
    const auto& cb = exact.comp(c);
    s += detail::parallel_sum(ca.interior_count(), [&](std::int64_t e) {
      const auto q = ca.decode(e);
      const double dd = ca.at(q[0], q[1], q[2]) - cb.at(q[0], q[1], q[2]);
      return dd * dd;
    });
  }
  return std::sqrt(g.cell_volume() * s);
}

// least-squares slope of ln(err) against ln(h)
double fitted_order(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(std::max(e[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

MmsResult run_mms(const RunConfig& cfg) {
  if (cfg.mms_resolutions.size() < 3)
    throw std::invalid_argument(
        "run_mms: need at least 3 resolutions for an order fit");
  if (cfg.dims.size() != 2)
    throw std::invalid_argument("run_mms: configure a 2D grid");

  const PhysicsParams phys = physics_from(cfg);
  MmsResult result;
  std::vector<double> hs, eu, ed;

  const double L = cfg.lengths[0];
  const int r0 = cfg.mms_resolutions.front();
  const double h0 = L / double(r0);

  for (int r : cfg.mms_resolutions) {
    const std::vector<int> dims{r, r};
    const std::vector<double> lengths{L, L};
    const GridSpec g = make_grid(dims, lengths, BcMode::Periodic);
    const ManufacturedCase mc = make_manufactured_case(
        cfg.mms_case, g, cfg.eps, cfg.director_perturb > 0 ? cfg.director_perturb
                                                           : 0.5,
        phys);
    const double h = L / double(r);
    const double dt = cfg.mms_dt0 * (h / h0) * (h / h0);

    SlabConfig slab = slab_from(cfg);
    slab.dt = dt;
    slab.slab_T = 4.0 * dt;
    ExternalForcing forcing;
    forcing.velocity = [&mc, g](double t) {
      return sample_forcing_u(mc, g, t);
    };
    forcing.director = [&mc, g](double t) {
      return sample_forcing_d(mc, g, t);
    };

    State s0 = sample_exact_state(mc, g, 0.0);
    auto [s_end, reports] =
        advance_to(s0, cfg.mms_t_end, slab, {}, &forcing);
    (void)reports;
    const State exact = sample_exact_state(mc, g, s_end.t);

    MmsRow row;
    row.h = h;
    row.dt = dt;
    row.err_u = face_l2_error(s_end.u, exact.u);
    row.err_d = director_l2_error(s_end.d, exact.d);
    if (!result.rows.empty()) {
      const auto& prev = result.rows.back();
      row.order_u = std::log(prev.err_u / row.err_u) / std::log(prev.h / row.h);
      row.order_d = std::log(prev.err_d / row.err_d) / std::log(prev.h / row.h);
    }
    result.rows.push_back(row);
    hs.push_back(h);
    eu.push_back(row.err_u);
    ed.push_back(row.err_d);
  }
  result.fitted_order_u = fitted_order(hs, eu);
  result.fitted_order_d = fitted_order(hs, ed);
  return result;
}

}  // namespace nlc

#pragma once

#include <string>
#include <vector>

#include "nlc/config.hpp"
#include "nlc/grid.hpp"
#include "nlc/io.hpp"
#include "nlc/operators.hpp"

namespace nlc {

/// Closed-form manufactured solution on a periodic 2D box. The director is
/// angle-parameterized, d* = (sin a, 0, cos a), so |d*| = 1 identically, and
/// u* is divergence-free by construction.
///
/// Cases:
///   steady_twist - u* = 0, a = k x (an equilibrium; both forcings vanish)
///   decaying_tg  - u* = eps e^{-2 mu k^2 t} (sin kx cos ky, -cos kx sin ky)
///                  with the matching pressure, a = a0 e^{-2 gamma k^2 t}
///                  cos kx cos ky
struct ManufacturedCase {
  std::string name;
  double eps = 0.1;     // velocity amplitude
  double alpha0 = 0.5;  // angle amplitude
  double kx = 1.0, ky = 1.0;
  int twist_k = 1;
  PhysicsParams phys;

  double alpha(double x, double y, double t) const;
  double alpha_x(double x, double y, double t) const;
  double alpha_y(double x, double y, double t) const;
  double alpha_lap(double x, double y, double t) const;
  double alpha_t(double x, double y, double t) const;
  double u_exact(int axis, double x, double y, double t) const;
  double p_exact(double x, double y, double t) const;
  std::array<double, 3> d_exact(double x, double y, double t) const;
  /// Momentum forcing g_u so that (u*, d*, P*) solves the forced system.
  double g_u(int axis, double x, double y, double t) const;
  /// Director forcing g_d.
  std::array<double, 3> g_d(double x, double y, double t) const;
};

/// Builds a case tied to the box geometry (base wavenumber 2 pi / L).
/// Requires a square periodic 2D box.
ManufacturedCase make_manufactured_case(const std::string& name,
                                        const GridSpec& g, double eps,
                                        double alpha0,
                                        const PhysicsParams& phys);

MacVectorField sample_forcing_u(const ManufacturedCase& mc, const GridSpec& g,
                                double t);
DirectorField sample_forcing_d(const ManufacturedCase& mc, const GridSpec& g,
                               double t);
State sample_exact_state(const ManufacturedCase& mc, const GridSpec& g,
                         double t);

struct MmsResult {
  std::vector<MmsRow> rows;
  double fitted_order_u = 0;
  double fitted_order_d = 0;
};

/// Runs the forced solver over cfg.mms_resolutions with dt scaled by h^2 and
/// reports the L2 errors of u and d at t_end plus fitted convergence orders.
/// Requires >= 3 resolutions.
MmsResult run_mms(const RunConfig& cfg);

}  // namespace nlc

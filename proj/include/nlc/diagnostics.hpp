#pragma once

#include <vector>

#include "nlc/operators.hpp"

namespace nlc {

/// One row of the energy time series emitted by simulate.
struct EnergyRecord {
  double t = 0;
  double energy = 0;      // E = 1/2 int (|u|^2 + lambda |grad d|^2)
  double dissipation = 0; // D = int (mu |grad u|^2 + lambda gamma |lap d + |grad d|^2 d|^2)
  double residual = 0;    // |E(t) - E(t-dt) + dt * D(t)|, D at the new state
  double drift = 0;       // max | |d|^2 - 1 |
  double u0_proxy = 0;    // data-size proxy, see data_size()
};

/// One row of the weak-strong comparison series.
struct RelEnergyRecord {
  double t = 0;
  double rel_energy = 0;  // R = int (|u-u~|^2 + |d-d~|^2 + |grad d - grad d~|^2)
  double phi = 0;         // Gronwall weight phi(s)
  double envelope = 0;    // (R(0)+offset) * exp(C_fit * int phi)
};

double total_energy(const State& s, const PhysicsParams& phys = {});
double dissipation(const State& s, const PhysicsParams& phys = {});

/// Energy-law residual across one accepted step. The dissipation is
/// evaluated at the new state, matching the backward-Euler update.
double energy_law_residual(const State& prev, const State& next, double dt,
                           const PhysicsParams& phys = {});

double unit_norm_drift(const DirectorField& d);

/// Discrete stand-in for the paper-level size of the data:
/// sqrt(|u|_2^2 + |grad u|_2^2) + sqrt(|grad d|_2^2 + |lap d|_2^2).
/// Homogeneous of degree one in the state fields.
double data_size(const State& s);

/// Max-norm of the director gradient (Frobenius per cell).
double grad_director_linf(const DirectorField& d);

/// Relative energy between two states on the same grid (throws GridMismatch).
double relative_energy(const State& a, const State& b);

/// Gronwall weight phi = 1 + |grad d|_inf^4 + |grad d|_inf^2 +
/// |grad d~|_inf^2 + |u|_inf^2 + |lap d|_inf, with (u, d) from `strong` and
/// d~ from `weak`.
double phi_sample(const State& strong, const State& weak);

/// Smallest constant C such that R(t) <= (R(0)+offset) * exp(C * int_0^t phi)
/// at every sample, where offset = max(0, floor - R(0)) substitutes the
/// projection error floor when R(0) vanishes. Returns 0 if R never exceeds
/// the base. Integrals are trapezoidal.
double fit_gronwall_constant(const std::vector<RelEnergyRecord>& records,
                             double floor = 1e-14);

/// Envelope series (R(0)+offset) * exp(c_fit * int_0^t phi) over the records.
std::vector<double> gronwall_envelope(
    const std::vector<RelEnergyRecord>& records, double c_fit,
    double floor = 1e-14);

}  // namespace nlc

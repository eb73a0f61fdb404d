#pragma once

#include <utility>

#include "nlc/grid.hpp"

namespace nlc {

struct PoissonSolveConfig {
  double tol = 1e-10;  // relative residual
  int max_iter = 20000;
};

struct SolverStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Solves lap(x) = rhs with the pure Neumann (Wall) or periodic pressure
/// operator by conjugate gradients, returning the zero-mean solution.
/// Throws IncompatibleRhs if |mean(rhs)| > tol * rms(rhs), NonConvergence on
/// iteration exhaustion. `guess` (optional) warm-starts the iteration.
ScalarField solve_poisson(const ScalarField& rhs, const PoissonSolveConfig& cfg,
                          const ScalarField* guess = nullptr,
                          SolverStats* stats = nullptr);

/// Discrete Leray projection: solves lap(phi) = div(u_star)/dt, subtracts
/// dt * grad(phi), and returns the divergence-free velocity together with the
/// zero-mean pressure phi. Expects boundary conditions applied to u_star.
std::pair<MacVectorField, ScalarField> project(
    const MacVectorField& u_star, double dt, const PoissonSolveConfig& cfg,
    const ScalarField* pressure_guess = nullptr, SolverStats* stats = nullptr);

/// Solves (I - c * lap) x = rhs on cell-centered data (Neumann or periodic
/// ghosts), one component at a time. c >= 0.
ScalarField helmholtz_solve_cell(const ScalarField& rhs, double c,
                                 const PoissonSolveConfig& cfg);
DirectorField helmholtz_solve_director(const DirectorField& rhs, double c,
                                       const PoissonSolveConfig& cfg);

/// Same Helmholtz solve on MAC components with the no-slip/periodic velocity
/// ghost rules; wall boundary faces are held at zero.
MacVectorField helmholtz_solve_mac(const MacVectorField& rhs, double c,
                                   const PoissonSolveConfig& cfg);

}  // namespace nlc

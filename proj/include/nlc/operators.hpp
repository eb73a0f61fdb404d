#pragma once

#include <array>

#include "nlc/grid.hpp"

namespace nlc {

/// Coefficients of the coupled system: viscosity mu, elastic coupling lambda,
/// director relaxation gamma. All default to one.
struct PhysicsParams {
  double mu = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
};

/// Advective = plain (u.grad)f; Skew = average of the advective and
/// divergence forms, which keeps <adv(u,f), f> near zero for solenoidal u.
enum class AdvectionForm { Advective, Skew };

/// Cell-centered gradient tensor: entry(c, axis) = d(axis) of component c,
/// centered differences, valid on the interior plus one ghost ring.
struct GradTensor {
  GridSpec grid;
  std::array<std::array<detail::Array3, 3>, 3> e;  // e[component][axis]
  double& at(int c, int axis, int i, int j, int k = 0) {
    return e[c][axis].at(i, j, k);
  }
  double at(int c, int axis, int i, int j, int k = 0) const {
    return e[c][axis].at(i, j, k);
  }
};

// All operators below assume boundary conditions have been applied to their
// inputs (ghost layers valid). Face-located outputs are zero on wall
// boundary faces by convention.
namespace ops {

MacVectorField gradient(const ScalarField& p);
ScalarField divergence(const MacVectorField& u);

ScalarField laplacian(const ScalarField& f);
MacVectorField laplacian(const MacVectorField& u);
DirectorField laplacian(const DirectorField& d);

ScalarField advect(const MacVectorField& u, const ScalarField& f,
                   AdvectionForm form = AdvectionForm::Advective);
DirectorField advect(const MacVectorField& u, const DirectorField& d,
                     AdvectionForm form = AdvectionForm::Advective);
MacVectorField advect(const MacVectorField& u, const MacVectorField& f,
                      AdvectionForm form = AdvectionForm::Advective);

GradTensor grad_tensor(const DirectorField& d);

/// Trace of the Gram matrix of grad_tensor, |grad d|^2 at cell centers,
/// valid on interior plus one ghost ring.
ScalarField grad_sq(const DirectorField& d);

/// -div(grad d (.) grad d): Gram matrix assembled at cell centers, then each
/// row divergenced onto faces.
MacVectorField elastic_force_direct(const DirectorField& d);

/// Same force through the algebraic identity
/// div(grad d (.) grad d) = grad(|grad d|^2 / 2) + (grad d)^T lap d,
/// with the cell-centered second term averaged to faces.
MacVectorField elastic_force_identity(const DirectorField& d);

/// -(u.grad)d + gamma (lap d + |grad d|^2 d), the right side of the director
/// equation, at cell centers.
DirectorField director_rhs(const MacVectorField& u, const DirectorField& d,
                           double gamma = 1.0);

/// Sum over components and axes of squared center-located velocity
/// derivatives; the |grad u|^2 integrand.
ScalarField velocity_grad_sq(const MacVectorField& u);

}  // namespace ops
}  // namespace nlc

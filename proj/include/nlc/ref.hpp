#pragma once

#include "nlc/operators.hpp"

// Serial reference implementations of every discrete operator, written as
// direct per-point stencil evaluation with inline boundary resolution (no
// ghost layers, no shared helpers with the production kernels). Tests use
// them as an independent oracle; the benchmark uses them as the serial
// baseline.
namespace nlc::ref {

/// Cell-centered value at a possibly out-of-range index, resolved by the
/// boundary rule (wraparound or even mirror).
double cell_at(const detail::Array3& a, const GridSpec& g, int i, int j,
               int k = 0);

/// Stored-face value of velocity component `axis` in mixed coordinates,
/// resolved by wraparound or the wall reflection rules.
double face_at(const MacVectorField& u, int axis, int i, int j, int k = 0);

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
ScalarField grad_sq(const DirectorField& d);
MacVectorField elastic_force_direct(const DirectorField& d);
MacVectorField elastic_force_identity(const DirectorField& d);
DirectorField director_rhs(const MacVectorField& u, const DirectorField& d,
                           double gamma = 1.0);
ScalarField velocity_grad_sq(const MacVectorField& u);

}  // namespace nlc::ref

#include "nlc/projection.hpp"

#include <cmath>
#include <functional>

#include "nlc/errors.hpp"
#include "nlc/operators.hpp"
#include "nlc/parallel.hpp"

namespace nlc {

namespace {

using detail::Array3;

double a3_dot(const Array3& a, const Array3& b) {
  return detail::parallel_sum(a.interior_count(), [&](std::int64_t e) {
    const auto q = a.decode(e);
    return a.at(q[0], q[1], q[2]) * b.at(q[0], q[1], q[2]);
  });
}

void a3_axpy(double alpha, const Array3& x, Array3& y) {
  const std::int64_t n = y.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
  for (std::int64_t e = 0; e < n; ++e) {
    const auto q = y.decode(e);
    y.at(q[0], q[1], q[2]) += alpha * x.at(q[0], q[1], q[2]);
  }
}

// p = r + beta * p
void a3_xpby(const Array3& r, double beta, Array3& p) {
  const std::int64_t n = p.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
  for (std::int64_t e = 0; e < n; ++e) {
    const auto q = p.decode(e);
    p.at(q[0], q[1], q[2]) =
        r.at(q[0], q[1], q[2]) + beta * p.at(q[0], q[1], q[2]);
  }
}

void a3_copy_interior(const Array3& src, Array3& dst) {
  const std::int64_t n = dst.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
  for (std::int64_t e = 0; e < n; ++e) {
    const auto q = dst.decode(e);
    dst.at(q[0], q[1], q[2]) = src.at(q[0], q[1], q[2]);
  }
}

double a3_sum(const Array3& a) {
  return detail::parallel_sum(a.interior_count(), [&](std::int64_t e) {
    const auto q = a.decode(e);
    return a.at(q[0], q[1], q[2]);
  });
}

void a3_shift(Array3& a, double s) {
  const std::int64_t n = a.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
  for (std::int64_t e = 0; e < n; ++e) {
    const auto q = a.decode(e);
    a.at(q[0], q[1], q[2]) += s;
  }
}

// Conjugate gradients on one array layout. `apply` computes y = A x and may
// refresh the ghost values of x first; it must be symmetric positive
// (semi-)definite on the iterated subspace.
SolverStats cg_solve(Array3& x, const Array3& b,
                     const std::function<void(Array3&, Array3&)>& apply,
                     double tol, int max_iter, const char* label,
                     bool zero_mean) {
  const std::int64_t n = x.interior_count();
  Array3 r(b.extents(), x.ghosts());
  Array3 p(b.extents(), x.ghosts());
  Array3 ap(b.extents(), x.ghosts());

  const double bb = a3_dot(b, b);
  if (bb == 0.0) {
    x.fill(0.0);
    return {0, 0.0};
  }
  const double stop = tol * tol * bb;

  apply(x, ap);
  a3_copy_interior(b, r);
  a3_axpy(-1.0, ap, r);
  a3_copy_interior(r, p);
  double rr = a3_dot(r, r);
  if (rr <= stop) return {0, std::sqrt(rr / bb)};

  for (int it = 1; it <= max_iter; ++it) {
    apply(p, ap);
    const double pap = a3_dot(p, ap);
    if (!(pap > 0.0))
      throw NonConvergence(std::string(label) + ": lost positive definiteness",
                           it, std::sqrt(rr / bb));
    const double alpha = rr / pap;
    a3_axpy(alpha, p, x);
    a3_axpy(-alpha, ap, r);
    const double rr_new = a3_dot(r, r);
    if (zero_mean && it % 64 == 0) a3_shift(x, -a3_sum(x) / double(n));
    if (rr_new <= stop) {
      if (zero_mean) a3_shift(x, -a3_sum(x) / double(n));
      return {it, std::sqrt(rr_new / bb)};
    }
    a3_xpby(r, rr_new / rr, p);
    rr = rr_new;
  }
  throw NonConvergence(std::string(label) + ": max iterations reached",
                       max_iter, std::sqrt(rr / bb));
}

// y = alpha x + beta (-lap x) over the given interior box.
void helmholtz_apply_box(const Array3& x, Array3& y, const GridSpec& g,
                         double alpha, double beta, const int lo[3],
                         const int hi[3]) {
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (g.cell_count() > 4096)
#endif
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double lap = 0.0;
        for (int ax = 0; ax < g.ndim; ++ax) {
          int qp[3] = {i, j, k}, qm[3] = {i, j, k};
          qp[ax] += 1;
          qm[ax] -= 1;
          lap += (x.at(qp[0], qp[1], qp[2]) - 2.0 * x.at(i, j, k) +
                  x.at(qm[0], qm[1], qm[2])) /
                 (g.h[ax] * g.h[ax]);
        }
        y.at(i, j, k) = alpha * x.at(i, j, k) - beta * lap;
      }
}

}  // namespace

ScalarField solve_poisson(const ScalarField& rhs, const PoissonSolveConfig& cfg,
                          const ScalarField* guess, SolverStats* stats) {
  const GridSpec& g = rhs.grid();
  const double mean = field_mean(rhs);
  // Compatibility is judged against the rhs magnitude (floored at 1) so that
  // roundoff-scale means of large fields do not trip the check.
  const double rms = std::sqrt(a3_dot(rhs.raw(), rhs.raw()) /
                               double(rhs.raw().interior_count()));
  if (std::abs(mean) > cfg.tol * std::max(1.0, rms))
    throw IncompatibleRhs(mean);

  // Solve (-lap) x = -(rhs - mean); subtracting the residual mean keeps the
  // all-Neumann system consistent to rounding.
  ScalarField b(g);
  {
    const auto& src = rhs.raw();
    auto& dst = b.raw();
    const std::int64_t n = dst.interior_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (std::int64_t e = 0; e < n; ++e) {
      const auto q = dst.decode(e);
      dst.at(q[0], q[1], q[2]) = -(src.at(q[0], q[1], q[2]) - mean);
    }
  }

  ScalarField x(g);
  if (guess) {
    if (!(guess->grid() == g)) throw GridMismatch("solve_poisson: guess grid");
    a3_copy_interior(guess->raw(), x.raw());
    a3_shift(x.raw(), -a3_sum(x.raw()) / double(x.raw().interior_count()));
  }

  const int lo[3] = {0, 0, 0};
  const int hi[3] = {g.dims[0], g.dims[1], g.nz()};
  auto apply = [&](Array3& xx, Array3& yy) {
    detail::fill_cell_ghosts(xx, g);
    helmholtz_apply_box(xx, yy, g, 0.0, 1.0, lo, hi);
  };
  const SolverStats st =
      cg_solve(x.raw(), b.raw(), apply, cfg.tol, cfg.max_iter, "poisson",
               /*zero_mean=*/true);
  if (stats) *stats = st;
  apply_scalar_bc(x);
  return x;
}

ScalarField helmholtz_solve_cell(const ScalarField& rhs, double c,
                                 const PoissonSolveConfig& cfg) {
  const GridSpec& g = rhs.grid();
  ScalarField x(g);
  a3_copy_interior(rhs.raw(), x.raw());
  const int lo[3] = {0, 0, 0};
  const int hi[3] = {g.dims[0], g.dims[1], g.nz()};
  auto apply = [&](Array3& xx, Array3& yy) {
    detail::fill_cell_ghosts(xx, g);
    helmholtz_apply_box(xx, yy, g, 1.0, c, lo, hi);
  };
  cg_solve(x.raw(), rhs.raw(), apply, cfg.tol, cfg.max_iter, "helmholtz-cell",
           /*zero_mean=*/false);
  apply_scalar_bc(x);
  return x;
}

DirectorField helmholtz_solve_director(const DirectorField& rhs, double c,
                                       const PoissonSolveConfig& cfg) {
  const GridSpec& g = rhs.grid();
  DirectorField out(g);
  const int lo[3] = {0, 0, 0};
  const int hi[3] = {g.dims[0], g.dims[1], g.nz()};
  for (int comp = 0; comp < 3; ++comp) {
    auto apply = [&](Array3& xx, Array3& yy) {
      detail::fill_cell_ghosts(xx, g);
      helmholtz_apply_box(xx, yy, g, 1.0, c, lo, hi);
    };
    a3_copy_interior(rhs.comp(comp), out.comp(comp));
    cg_solve(out.comp(comp), rhs.comp(comp), apply, cfg.tol, cfg.max_iter,
             "helmholtz-director", /*zero_mean=*/false);
  }
  apply_director_bc(out);
  return out;
}

MacVectorField helmholtz_solve_mac(const MacVectorField& rhs, double c,
                                   const PoissonSolveConfig& cfg) {
  const GridSpec& g = rhs.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3] = {0, 0, 0};
    int hi[3] = {g.dims[0], g.dims[1], g.nz()};
    if (g.bc == BcMode::Wall) lo[a] = 1;

    // Pinned wall faces stay zero: the right-hand side is zeroed there and
    // the operator acts as the identity on those rows.
    Array3 b(rhs.comp(a).extents(), rhs.comp(a).ghosts());
    a3_copy_interior(rhs.comp(a), b);
    if (g.bc == BcMode::Wall) {
      const auto& n = b.extents();
      for (int k = 0; k < n[2]; ++k)
        for (int j = 0; j < n[1]; ++j)
          for (int i = 0; i < n[0]; ++i) {
            int q[3] = {i, j, k};
            if (q[a] == 0 || q[a] == n[a] - 1) b.at(i, j, k) = 0.0;
          }
    }

    auto apply = [&](Array3& xx, Array3& yy) {
      apply_velocity_component_bc(xx, a, g);
      helmholtz_apply_box(xx, yy, g, 1.0, c, lo, hi);
      if (g.bc == BcMode::Wall) {
        // identity rows on the pinned faces
        const auto& n = yy.extents();
        for (int k = 0; k < n[2]; ++k)
          for (int j = 0; j < n[1]; ++j)
            for (int i = 0; i < n[0]; ++i) {
              int q[3] = {i, j, k};
              if (q[a] == 0 || q[a] == n[a] - 1)
                yy.at(i, j, k) = xx.at(i, j, k);
            }
      }
    };
    a3_copy_interior(b, out.comp(a));
    cg_solve(out.comp(a), b, apply, cfg.tol, cfg.max_iter, "helmholtz-mac",
             /*zero_mean=*/false);
  }
  apply_velocity_bc(out);
  return out;
}

std::pair<MacVectorField, ScalarField> project(const MacVectorField& u_star,
                                               double dt,
                                               const PoissonSolveConfig& cfg,
                                               const ScalarField* pressure_guess,
                                               SolverStats* stats) {
  const GridSpec& g = u_star.grid();
  ScalarField rhs = ops::divergence(u_star);
  {
    auto& a = rhs.raw();
    const std::int64_t n = a.interior_count();
    const double inv_dt = 1.0 / dt;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
#endif
    for (std::int64_t e = 0; e < n; ++e) {
      const auto q = a.decode(e);
      a.at(q[0], q[1], q[2]) *= inv_dt;
    }
  }
  ScalarField phi = solve_poisson(rhs, cfg, pressure_guess, stats);
  const MacVectorField gp = ops::gradient(phi);
  MacVectorField u = u_star;
  for (int a = 0; a < g.ndim; ++a) a3_axpy(-dt, gp.comp(a), u.comp(a));
  apply_velocity_bc(u);
  return {std::move(u), std::move(phi)};
}

}  // namespace nlc

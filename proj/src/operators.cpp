#include "nlc/operators.hpp"

#include <cmath>

namespace nlc::ops {

namespace {

using detail::Array3;

constexpr std::int64_t kParThreshold = 4096;

std::int64_t work_size(const GridSpec& g) { return g.cell_count(); }

// Loop bounds for face-located outputs normal to `axis`: wall boundary faces
// are skipped (they stay at the constructor's zero), periodic covers all
// stored faces.
int face_lo(const GridSpec& g, int) { return g.bc == BcMode::Wall ? 1 : 0; }

}  // namespace

MacVectorField gradient(const ScalarField& p) {
  const GridSpec& g = p.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    auto& oc = out.comp(a);
    int lo[3] = {0, 0, 0};
    int hi[3] = {g.dims[0], g.dims[1], g.nz()};
    lo[a] = face_lo(g, a);
    const double inv_h = 1.0 / g.h[a];
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          int q[3] = {i, j, k};
          int ql[3] = {i, j, k};
          ql[a] -= 1;
          oc.at(i, j, k) =
              (p.at(q[0], q[1], q[2]) - p.at(ql[0], ql[1], ql[2])) * inv_h;
        }
  }
  return out;
}

ScalarField divergence(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  ScalarField out(g);
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = 0; k < nzv; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int qh[3] = {i, j, k};
          qh[a] += 1;
          s += (u.at(a, qh[0], qh[1], qh[2]) - u.at(a, i, j, k)) / g.h[a];
        }
        out.at(i, j, k) = s;
      }
  return out;
}

namespace {

// 5/7-point Laplacian of one array over the given index box.
void laplacian_box(const Array3& f, Array3& out, const GridSpec& g,
                   const int lo[3], const int hi[3]) {
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int qp[3] = {i, j, k}, qm[3] = {i, j, k};
          qp[a] += 1;
          qm[a] -= 1;
          s += (f.at(qp[0], qp[1], qp[2]) - 2.0 * f.at(i, j, k) +
                f.at(qm[0], qm[1], qm[2])) /
               (g.h[a] * g.h[a]);
        }
        out.at(i, j, k) = s;
      }
}

}  // namespace

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  ScalarField out(g);
  const int lo[3] = {0, 0, 0};
  const int hi[3] = {g.dims[0], g.dims[1], g.nz()};
  laplacian_box(f.raw(), out.raw(), g, lo, hi);
  return out;
}

MacVectorField laplacian(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3] = {0, 0, 0};
    int hi[3] = {g.dims[0], g.dims[1], g.nz()};
    lo[a] = face_lo(g, a);
    laplacian_box(u.comp(a), out.comp(a), g, lo, hi);
  }
  return out;
}

DirectorField laplacian(const DirectorField& d) {
  const GridSpec& g = d.grid();
  DirectorField out(g);
  const int lo[3] = {0, 0, 0};
  const int hi[3] = {g.dims[0], g.dims[1], g.nz()};
  for (int c = 0; c < 3; ++c) laplacian_box(d.comp(c), out.comp(c), g, lo, hi);
  return out;
}

namespace {

// (u.grad)f for one cell-centered array, optionally blended with the
// divergence form.
void advect_cell_array(const MacVectorField& u, const Array3& f, Array3& out,
                       const GridSpec& g, AdvectionForm form) {
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
  const bool skew = form == AdvectionForm::Skew;
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = 0; k < nzv; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double adv = 0.0;
        double div = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int qp[3] = {i, j, k}, qm[3] = {i, j, k}, fp[3] = {i, j, k};
          qp[a] += 1;
          qm[a] -= 1;
          fp[a] += 1;
          const double u_lo = u.at(a, i, j, k);
          const double u_hi = u.at(a, fp[0], fp[1], fp[2]);
          const double fc = f.at(i, j, k);
          const double f_hi = f.at(qp[0], qp[1], qp[2]);
          const double f_lo = f.at(qm[0], qm[1], qm[2]);
          adv += 0.5 * (u_lo + u_hi) * (f_hi - f_lo) / (2.0 * g.h[a]);
          if (skew)
            div += (u_hi * 0.5 * (fc + f_hi) - u_lo * 0.5 * (f_lo + fc)) /
                   g.h[a];
        }
        out.at(i, j, k) = skew ? 0.5 * (adv + div) : adv;
      }
}

}  // namespace

ScalarField advect(const MacVectorField& u, const ScalarField& f,
                   AdvectionForm form) {
  ScalarField out(f.grid());
  advect_cell_array(u, f.raw(), out.raw(), f.grid(), form);
  return out;
}

DirectorField advect(const MacVectorField& u, const DirectorField& d,
                     AdvectionForm form) {
  DirectorField out(d.grid());
  for (int c = 0; c < 3; ++c)
    advect_cell_array(u, d.comp(c), out.comp(c), d.grid(), form);
  return out;
}

MacVectorField advect(const MacVectorField& u, const MacVectorField& f,
                      AdvectionForm form) {
  const GridSpec& g = u.grid();
  MacVectorField out(g);
  const bool skew = form == AdvectionForm::Skew;
  for (int a = 0; a < g.ndim; ++a) {
    auto& oc = out.comp(a);
    int lo[3] = {0, 0, 0};
    int hi[3] = {g.dims[0], g.dims[1], g.nz()};
    lo[a] = face_lo(g, a);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          // Mixed coordinates: slot `a` is the face index, others are cells.
          const int q[3] = {i, j, k};
          int cl[3] = {i, j, k};  // cell left of the face along a
          cl[a] -= 1;
          const int* cr = q;  // cell right of the face along a
          double adv = 0.0, div = 0.0;
          for (int ax = 0; ax < g.ndim; ++ax) {
            int qp[3] = {q[0], q[1], q[2]}, qm[3] = {q[0], q[1], q[2]};
            qp[ax] += 1;
            qm[ax] -= 1;
            const double f_hi = f.at(a, qp[0], qp[1], qp[2]);
            const double f_lo = f.at(a, qm[0], qm[1], qm[2]);
            const double fc = f.at(a, q[0], q[1], q[2]);
            if (ax == a) {
              const double uc = u.at(a, q[0], q[1], q[2]);
              adv += uc * (f_hi - f_lo) / (2.0 * g.h[ax]);
              if (skew) {
                const double u_hi = u.at(a, qp[0], qp[1], qp[2]);
                const double u_lo = u.at(a, qm[0], qm[1], qm[2]);
                const double flux_r = 0.5 * (uc + u_hi) * 0.5 * (fc + f_hi);
                const double flux_l = 0.5 * (u_lo + uc) * 0.5 * (f_lo + fc);
                div += (flux_r - flux_l) / g.h[ax];
              }
            } else {
              int clp[3] = {cl[0], cl[1], cl[2]}, crp[3] = {cr[0], cr[1], cr[2]};
              clp[ax] += 1;
              crp[ax] += 1;
              const double u_ll = u.at(ax, cl[0], cl[1], cl[2]);
              const double u_lh = u.at(ax, clp[0], clp[1], clp[2]);
              const double u_rl = u.at(ax, cr[0], cr[1], cr[2]);
              const double u_rh = u.at(ax, crp[0], crp[1], crp[2]);
              const double uc = 0.25 * (u_ll + u_lh + u_rl + u_rh);
              adv += uc * (f_hi - f_lo) / (2.0 * g.h[ax]);
              if (skew) {
                const double flux_p =
                    0.5 * (u_lh + u_rh) * 0.5 * (fc + f_hi);
                const double flux_m =
                    0.5 * (u_ll + u_rl) * 0.5 * (f_lo + fc);
                div += (flux_p - flux_m) / g.h[ax];
              }
            }
          }
          oc.at(i, j, k) = skew ? 0.5 * (adv + div) : adv;
        }
  }
  return out;
}

namespace {

// Index box covering the interior plus one ghost ring on active axes.
void ring1_box(const GridSpec& g, int lo[3], int hi[3]) {
  lo[0] = -1;
  lo[1] = -1;
  lo[2] = g.ndim == 3 ? -1 : 0;
  hi[0] = g.dims[0] + 1;
  hi[1] = g.dims[1] + 1;
  hi[2] = g.ndim == 3 ? g.dims[2] + 1 : 1;
}

std::array<int, 3> ring1_ghosts(const GridSpec& g) {
  return {1, 1, g.ndim == 3 ? 1 : 0};
}

}  // namespace

GradTensor grad_tensor(const DirectorField& d) {
  const GridSpec& g = d.grid();
  GradTensor t;
  t.grid = g;
  int lo[3], hi[3];
  ring1_box(g, lo, hi);
  for (int c = 0; c < 3; ++c)
    for (int ax = 0; ax < g.ndim; ++ax) {
      t.e[c][ax].reset(detail::cell_extents(g), ring1_ghosts(g));
      auto& e = t.e[c][ax];
      const auto& dc = d.comp(c);
      const double inv_2h = 0.5 / g.h[ax];
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
      for (int k = lo[2]; k < hi[2]; ++k)
        for (int j = lo[1]; j < hi[1]; ++j)
          for (int i = lo[0]; i < hi[0]; ++i) {
            int qp[3] = {i, j, k}, qm[3] = {i, j, k};
            qp[ax] += 1;
            qm[ax] -= 1;
            e.at(i, j, k) = (dc.at(qp[0], qp[1], qp[2]) -
                             dc.at(qm[0], qm[1], qm[2])) *
                            inv_2h;
          }
    }
  return t;
}

ScalarField grad_sq(const DirectorField& d) {
  const GridSpec& g = d.grid();
  const GradTensor t = grad_tensor(d);
  ScalarField out(g);
  int lo[3], hi[3];
  ring1_box(g, lo, hi);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c)
          for (int ax = 0; ax < g.ndim; ++ax) {
            const double v = t.at(c, ax, i, j, k);
            s += v * v;
          }
        out.at(i, j, k) = s;
      }
  return out;
}

MacVectorField elastic_force_direct(const DirectorField& d) {
  const GridSpec& g = d.grid();
  const GradTensor t = grad_tensor(d);
  int lo[3], hi[3];
  ring1_box(g, lo, hi);

  // Gram matrix S(ai,aj) = sum_c d(ai) d_c * d(aj) d_c on interior + ring 1.
  std::array<std::array<Array3, 3>, 3> S;
  for (int ai = 0; ai < g.ndim; ++ai)
    for (int aj = ai; aj < g.ndim; ++aj) {
      S[ai][aj].reset(detail::cell_extents(g), ring1_ghosts(g));
      auto& s = S[ai][aj];
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
      for (int k = lo[2]; k < hi[2]; ++k)
        for (int j = lo[1]; j < hi[1]; ++j)
          for (int i = lo[0]; i < hi[0]; ++i) {
            double v = 0.0;
            for (int c = 0; c < 3; ++c)
              v += t.at(c, ai, i, j, k) * t.at(c, aj, i, j, k);
            s.at(i, j, k) = v;
          }
    }
  auto S_at = [&](int ai, int aj, int i, int j, int k) {
    return ai <= aj ? S[ai][aj].at(i, j, k) : S[aj][ai].at(i, j, k);
  };

  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    auto& oc = out.comp(a);
    int flo[3] = {0, 0, 0};
    int fhi[3] = {g.dims[0], g.dims[1], g.nz()};
    flo[a] = face_lo(g, a);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
    for (int k = flo[2]; k < fhi[2]; ++k)
      for (int j = flo[1]; j < fhi[1]; ++j)
        for (int i = flo[0]; i < fhi[0]; ++i) {
          const int cr[3] = {i, j, k};
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          double divr = (S_at(a, a, cr[0], cr[1], cr[2]) -
                         S_at(a, a, cl[0], cl[1], cl[2])) /
                        g.h[a];
          for (int aj = 0; aj < g.ndim; ++aj) {
            if (aj == a) continue;
            int clp[3] = {cl[0], cl[1], cl[2]}, clm[3] = {cl[0], cl[1], cl[2]};
            int crp[3] = {cr[0], cr[1], cr[2]}, crm[3] = {cr[0], cr[1], cr[2]};
            clp[aj] += 1;
            clm[aj] -= 1;
            crp[aj] += 1;
            crm[aj] -= 1;
            divr += (S_at(a, aj, clp[0], clp[1], clp[2]) +
                     S_at(a, aj, crp[0], crp[1], crp[2]) -
                     S_at(a, aj, clm[0], clm[1], clm[2]) -
                     S_at(a, aj, crm[0], crm[1], crm[2])) /
                    (4.0 * g.h[aj]);
          }
          oc.at(i, j, k) = -divr;
        }
  }
  return out;
}

MacVectorField elastic_force_identity(const DirectorField& d) {
  const GridSpec& g = d.grid();
  const GradTensor t = grad_tensor(d);
  int lo[3], hi[3];
  ring1_box(g, lo, hi);

  // |grad d|^2 and (grad d)^T lap d on interior + ring 1. The Laplacian on
  // ring 1 reaches the second ghost ring of d.
  Array3 w(detail::cell_extents(g), ring1_ghosts(g));
  std::array<Array3, 3> cvec;
  for (int a = 0; a < g.ndim; ++a)
    cvec[a].reset(detail::cell_extents(g), ring1_ghosts(g));
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double lap[3];
        for (int c = 0; c < 3; ++c) {
          double s = 0.0;
          for (int ax = 0; ax < g.ndim; ++ax) {
            int qp[3] = {i, j, k}, qm[3] = {i, j, k};
            qp[ax] += 1;
            qm[ax] -= 1;
            s += (d.at(c, qp[0], qp[1], qp[2]) - 2.0 * d.at(c, i, j, k) +
                  d.at(c, qm[0], qm[1], qm[2])) /
                 (g.h[ax] * g.h[ax]);
          }
          lap[c] = s;
        }
        double wsum = 0.0;
        for (int c = 0; c < 3; ++c)
          for (int ax = 0; ax < g.ndim; ++ax)
            wsum += t.at(c, ax, i, j, k) * t.at(c, ax, i, j, k);
        w.at(i, j, k) = wsum;
        for (int a = 0; a < g.ndim; ++a) {
          double cv = 0.0;
          for (int c = 0; c < 3; ++c) cv += t.at(c, a, i, j, k) * lap[c];
          cvec[a].at(i, j, k) = cv;
        }
      }

  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    auto& oc = out.comp(a);
    int flo[3] = {0, 0, 0};
    int fhi[3] = {g.dims[0], g.dims[1], g.nz()};
    flo[a] = face_lo(g, a);
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
    for (int k = flo[2]; k < fhi[2]; ++k)
      for (int j = flo[1]; j < fhi[1]; ++j)
        for (int i = flo[0]; i < fhi[0]; ++i) {
          const int cr[3] = {i, j, k};
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          const double grad_w =
              (w.at(cr[0], cr[1], cr[2]) - w.at(cl[0], cl[1], cl[2])) /
              (2.0 * g.h[a]);
          const double cavg = 0.5 * (cvec[a].at(cl[0], cl[1], cl[2]) +
                                     cvec[a].at(cr[0], cr[1], cr[2]));
          oc.at(i, j, k) = -grad_w - cavg;
        }
  }
  return out;
}

DirectorField director_rhs(const MacVectorField& u, const DirectorField& d,
                           double gamma) {
  const GridSpec& g = d.grid();
  const DirectorField adv = advect(u, d, AdvectionForm::Advective);
  const DirectorField lap = laplacian(d);
  const ScalarField w = grad_sq(d);
  DirectorField out(g);
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
  for (int c = 0; c < 3; ++c) {
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
    for (int k = 0; k < nzv; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          out.at(c, i, j, k) =
              -adv.at(c, i, j, k) +
              gamma * (lap.at(c, i, j, k) + w.at(i, j, k) * d.at(c, i, j, k));
  }
  return out;
}

ScalarField velocity_grad_sq(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  ScalarField out(g);
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (work_size(g) > kParThreshold)
#endif
  for (int k = 0; k < nzv; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int fp[3] = {i, j, k};
          fp[a] += 1;
          const double dnorm =
              (u.at(a, fp[0], fp[1], fp[2]) - u.at(a, i, j, k)) / g.h[a];
          s += dnorm * dnorm;
          for (int ax = 0; ax < g.ndim; ++ax) {
            if (ax == a) continue;
            // centered difference of the center-averaged component
            int qp[3] = {i, j, k}, qm[3] = {i, j, k};
            qp[ax] += 1;
            qm[ax] -= 1;
            int qpf[3] = {qp[0], qp[1], qp[2]}, qmf[3] = {qm[0], qm[1], qm[2]};
            qpf[a] += 1;
            qmf[a] += 1;
            const double cp =
                0.5 * (u.at(a, qp[0], qp[1], qp[2]) +
                       u.at(a, qpf[0], qpf[1], qpf[2]));
            const double cm =
                0.5 * (u.at(a, qm[0], qm[1], qm[2]) +
                       u.at(a, qmf[0], qmf[1], qmf[2]));
            const double dt_ = (cp - cm) / (2.0 * g.h[ax]);
            s += dt_ * dt_;
          }
        }
        out.at(i, j, k) = s;
      }
  return out;
}

}  // namespace nlc::ops

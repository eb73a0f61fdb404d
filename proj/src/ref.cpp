#include "nlc/ref.hpp"

#include <cmath>

namespace nlc::ref {

namespace {

int wrap(int i, int n) {
  int s = i % n;
  return s < 0 ? s + n : s;
}

// Even mirror of cell centers across the wall planes at index 0 and n.
int mirror(int i, int n) {
  if (i < 0) return -1 - i;
  if (i >= n) return 2 * n - 1 - i;
  return i;
}

}  // namespace

double cell_at(const detail::Array3& a, const GridSpec& g, int i, int j,
               int k) {
  int q[3] = {i, j, k};
  for (int ax = 0; ax < g.ndim; ++ax) {
    const int n = ax == 2 ? g.nz() : g.dims[ax];
    q[ax] = g.bc == BcMode::Periodic ? wrap(q[ax], n) : mirror(q[ax], n);
  }
  return a.at(q[0], q[1], q[2]);
}

double face_at(const MacVectorField& u, int axis, int i, int j, int k) {
  const GridSpec& g = u.grid();
  int q[3] = {i, j, k};
  double sign = 1.0;
  for (int ax = 0; ax < g.ndim; ++ax) {
    if (g.bc == BcMode::Periodic) {
      q[ax] = wrap(q[ax], g.dims[ax]);
      continue;
    }
    if (ax == axis) {
      // odd about the boundary faces at 0 and n; the boundary faces are zero
      const int n = g.dims[ax];
      int v = q[ax];
      if (v < 0) {
        v = -v;
        sign = -sign;
      } else if (v > n) {
        v = 2 * n - v;
        sign = -sign;
      }
      if (v == 0 || v == n) return 0.0;
      q[ax] = v;
    } else {
      // odd about the wall plane between the ghost row and the first row
      const int n = ax == 2 ? g.nz() : g.dims[ax];
      int v = q[ax];
      if (v < 0) {
        v = -1 - v;
        sign = -sign;
      } else if (v >= n) {
        v = 2 * n - 1 - v;
        sign = -sign;
      }
      q[ax] = v;
    }
  }
  return sign * u.at(axis, q[0], q[1], q[2]);
}

namespace {

// Loop bounds for face outputs normal to `axis` (wall boundary faces skipped).
void face_bounds(const GridSpec& g, int axis, int lo[3], int hi[3]) {
  lo[0] = lo[1] = lo[2] = 0;
  hi[0] = g.dims[0];
  hi[1] = g.dims[1];
  hi[2] = g.nz();
  if (g.bc == BcMode::Wall) lo[axis] = 1;
}

void cell_bounds(const GridSpec& g, int lo[3], int hi[3]) {
  lo[0] = lo[1] = lo[2] = 0;
  hi[0] = g.dims[0];
  hi[1] = g.dims[1];
  hi[2] = g.nz();
}

double dir_at(const DirectorField& d, int c, int i, int j, int k) {
  return cell_at(d.comp(c), d.grid(), i, j, k);
}

double grad_entry(const DirectorField& d, int c, int ax, int i, int j, int k) {
  const GridSpec& g = d.grid();
  int qp[3] = {i, j, k}, qm[3] = {i, j, k};
  qp[ax] += 1;
  qm[ax] -= 1;
  return (dir_at(d, c, qp[0], qp[1], qp[2]) -
          dir_at(d, c, qm[0], qm[1], qm[2])) /
         (2.0 * g.h[ax]);
}

double gram_entry(const DirectorField& d, int ai, int aj, int i, int j,
                  int k) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    s += grad_entry(d, c, ai, i, j, k) * grad_entry(d, c, aj, i, j, k);
  return s;
}

double grad_sq_at(const DirectorField& d, int i, int j, int k) {
  const GridSpec& g = d.grid();
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (int ax = 0; ax < g.ndim; ++ax) {
      const double v = grad_entry(d, c, ax, i, j, k);
      s += v * v;
    }
  return s;
}

double lap_dir_at(const DirectorField& d, int c, int i, int j, int k) {
  const GridSpec& g = d.grid();
  double s = 0.0;
  for (int ax = 0; ax < g.ndim; ++ax) {
    int qp[3] = {i, j, k}, qm[3] = {i, j, k};
    qp[ax] += 1;
    qm[ax] -= 1;
    s += (dir_at(d, c, qp[0], qp[1], qp[2]) - 2.0 * dir_at(d, c, i, j, k) +
          dir_at(d, c, qm[0], qm[1], qm[2])) /
         (g.h[ax] * g.h[ax]);
  }
  return s;
}

double center_vel(const MacVectorField& u, int a, int i, int j, int k) {
  int fp[3] = {i, j, k};
  fp[a] += 1;
  return 0.5 * (face_at(u, a, i, j, k) + face_at(u, a, fp[0], fp[1], fp[2]));
}

}  // namespace

MacVectorField gradient(const ScalarField& p) {
  const GridSpec& g = p.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3], hi[3];
    face_bounds(g, a, lo, hi);
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          out.at(a, i, j, k) = (cell_at(p.raw(), g, i, j, k) -
                                cell_at(p.raw(), g, cl[0], cl[1], cl[2])) /
                               g.h[a];
        }
  }
  return out;
}

ScalarField divergence(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  ScalarField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int fp[3] = {i, j, k};
          fp[a] += 1;
          s += (face_at(u, a, fp[0], fp[1], fp[2]) - face_at(u, a, i, j, k)) /
               g.h[a];
        }
        out.at(i, j, k) = s;
      }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  ScalarField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double s = 0.0;
        for (int ax = 0; ax < g.ndim; ++ax) {
          int qp[3] = {i, j, k}, qm[3] = {i, j, k};
          qp[ax] += 1;
          qm[ax] -= 1;
          s += (cell_at(f.raw(), g, qp[0], qp[1], qp[2]) -
                2.0 * cell_at(f.raw(), g, i, j, k) +
                cell_at(f.raw(), g, qm[0], qm[1], qm[2])) /
               (g.h[ax] * g.h[ax]);
        }
        out.at(i, j, k) = s;
      }
  return out;
}

MacVectorField laplacian(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3], hi[3];
    face_bounds(g, a, lo, hi);
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          double s = 0.0;
          for (int ax = 0; ax < g.ndim; ++ax) {
            int qp[3] = {i, j, k}, qm[3] = {i, j, k};
            qp[ax] += 1;
            qm[ax] -= 1;
            s += (face_at(u, a, qp[0], qp[1], qp[2]) -
                  2.0 * face_at(u, a, i, j, k) +
                  face_at(u, a, qm[0], qm[1], qm[2])) /
                 (g.h[ax] * g.h[ax]);
          }
          out.at(a, i, j, k) = s;
        }
  }
  return out;
}

DirectorField laplacian(const DirectorField& d) {
  const GridSpec& g = d.grid();
  DirectorField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int c = 0; c < 3; ++c)
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i)
          out.at(c, i, j, k) = lap_dir_at(d, c, i, j, k);
  return out;
}

namespace {

double advect_cell_at(const MacVectorField& u, const detail::Array3& f,
                      const GridSpec& g, AdvectionForm form, int i, int j,
                      int k) {
  double adv = 0.0, div = 0.0;
  for (int a = 0; a < g.ndim; ++a) {
    int qp[3] = {i, j, k}, qm[3] = {i, j, k}, fp[3] = {i, j, k};
    qp[a] += 1;
    qm[a] -= 1;
    fp[a] += 1;
    const double u_lo = face_at(u, a, i, j, k);
    const double u_hi = face_at(u, a, fp[0], fp[1], fp[2]);
    const double fc = cell_at(f, g, i, j, k);
    const double f_hi = cell_at(f, g, qp[0], qp[1], qp[2]);
    const double f_lo = cell_at(f, g, qm[0], qm[1], qm[2]);
    adv += 0.5 * (u_lo + u_hi) * (f_hi - f_lo) / (2.0 * g.h[a]);
    if (form == AdvectionForm::Skew)
      div += (u_hi * 0.5 * (fc + f_hi) - u_lo * 0.5 * (f_lo + fc)) / g.h[a];
  }
  return form == AdvectionForm::Skew ? 0.5 * (adv + div) : adv;
}

}  // namespace

ScalarField advect(const MacVectorField& u, const ScalarField& f,
                   AdvectionForm form) {
  const GridSpec& g = f.grid();
  ScalarField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i)
        out.at(i, j, k) = advect_cell_at(u, f.raw(), g, form, i, j, k);
  return out;
}

DirectorField advect(const MacVectorField& u, const DirectorField& d,
                     AdvectionForm form) {
  const GridSpec& g = d.grid();
  DirectorField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int c = 0; c < 3; ++c)
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i)
          out.at(c, i, j, k) = advect_cell_at(u, d.comp(c), g, form, i, j, k);
  return out;
}

MacVectorField advect(const MacVectorField& u, const MacVectorField& f,
                      AdvectionForm form) {
  const GridSpec& g = u.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3], hi[3];
    face_bounds(g, a, lo, hi);
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          const int q[3] = {i, j, k};
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          const int* cr = q;
          double adv = 0.0, div = 0.0;
          for (int ax = 0; ax < g.ndim; ++ax) {
            int qp[3] = {q[0], q[1], q[2]}, qm[3] = {q[0], q[1], q[2]};
            qp[ax] += 1;
            qm[ax] -= 1;
            const double f_hi = face_at(f, a, qp[0], qp[1], qp[2]);
            const double f_lo = face_at(f, a, qm[0], qm[1], qm[2]);
            const double fc = face_at(f, a, q[0], q[1], q[2]);
            if (ax == a) {
              const double uc = face_at(u, a, q[0], q[1], q[2]);
              adv += uc * (f_hi - f_lo) / (2.0 * g.h[ax]);
              if (form == AdvectionForm::Skew) {
                const double u_hi = face_at(u, a, qp[0], qp[1], qp[2]);
                const double u_lo = face_at(u, a, qm[0], qm[1], qm[2]);
                div += (0.5 * (uc + u_hi) * 0.5 * (fc + f_hi) -
                        0.5 * (u_lo + uc) * 0.5 * (f_lo + fc)) /
                       g.h[ax];
              }
            } else {
              int clp[3] = {cl[0], cl[1], cl[2]},
                  crp[3] = {cr[0], cr[1], cr[2]};
              clp[ax] += 1;
              crp[ax] += 1;
              const double u_ll = face_at(u, ax, cl[0], cl[1], cl[2]);
              const double u_lh = face_at(u, ax, clp[0], clp[1], clp[2]);
              const double u_rl = face_at(u, ax, cr[0], cr[1], cr[2]);
              const double u_rh = face_at(u, ax, crp[0], crp[1], crp[2]);
              adv += 0.25 * (u_ll + u_lh + u_rl + u_rh) * (f_hi - f_lo) /
                     (2.0 * g.h[ax]);
              if (form == AdvectionForm::Skew)
                div += (0.5 * (u_lh + u_rh) * 0.5 * (fc + f_hi) -
                        0.5 * (u_ll + u_rl) * 0.5 * (f_lo + fc)) /
                       g.h[ax];
            }
          }
          out.at(a, i, j, k) =
              form == AdvectionForm::Skew ? 0.5 * (adv + div) : adv;
        }
  }
  return out;
}

GradTensor grad_tensor(const DirectorField& d) {
  const GridSpec& g = d.grid();
  GradTensor t;
  t.grid = g;
  const std::array<int, 3> gw = {1, 1, g.ndim == 3 ? 1 : 0};
  for (int c = 0; c < 3; ++c)
    for (int ax = 0; ax < g.ndim; ++ax) {
      t.e[c][ax].reset(detail::cell_extents(g), gw);
      for (int k = -gw[2]; k < g.nz() + gw[2]; ++k)
        for (int j = -1; j < g.dims[1] + 1; ++j)
          for (int i = -1; i < g.dims[0] + 1; ++i)
            t.e[c][ax].at(i, j, k) = grad_entry(d, c, ax, i, j, k);
    }
  return t;
}

ScalarField grad_sq(const DirectorField& d) {
  const GridSpec& g = d.grid();
  ScalarField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i)
        out.at(i, j, k) = grad_sq_at(d, i, j, k);
  return out;
}

MacVectorField elastic_force_direct(const DirectorField& d) {
  const GridSpec& g = d.grid();
  MacVectorField out(g);
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3], hi[3];
    face_bounds(g, a, lo, hi);
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          const int cr[3] = {i, j, k};
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          double divr = (gram_entry(d, a, a, cr[0], cr[1], cr[2]) -
                         gram_entry(d, a, a, cl[0], cl[1], cl[2])) /
                        g.h[a];
          for (int aj = 0; aj < g.ndim; ++aj) {
            if (aj == a) continue;
            int clp[3] = {cl[0], cl[1], cl[2]}, clm[3] = {cl[0], cl[1], cl[2]};
            int crp[3] = {cr[0], cr[1], cr[2]}, crm[3] = {cr[0], cr[1], cr[2]};
            clp[aj] += 1;
            clm[aj] -= 1;
            crp[aj] += 1;
            crm[aj] -= 1;
            divr += (gram_entry(d, a, aj, clp[0], clp[1], clp[2]) +
                     gram_entry(d, a, aj, crp[0], crp[1], crp[2]) -
                     gram_entry(d, a, aj, clm[0], clm[1], clm[2]) -
                     gram_entry(d, a, aj, crm[0], crm[1], crm[2])) /
                    (4.0 * g.h[aj]);
          }
          out.at(a, i, j, k) = -divr;
        }
  }
  return out;
}

MacVectorField elastic_force_identity(const DirectorField& d) {
  const GridSpec& g = d.grid();
  MacVectorField out(g);
  auto cvec = [&](int a, int i, int j, int k) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
      s += grad_entry(d, c, a, i, j, k) * lap_dir_at(d, c, i, j, k);
    return s;
  };
  for (int a = 0; a < g.ndim; ++a) {
    int lo[3], hi[3];
    face_bounds(g, a, lo, hi);
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          const int cr[3] = {i, j, k};
          int cl[3] = {i, j, k};
          cl[a] -= 1;
          const double grad_w = (grad_sq_at(d, cr[0], cr[1], cr[2]) -
                                 grad_sq_at(d, cl[0], cl[1], cl[2])) /
                                (2.0 * g.h[a]);
          const double cavg = 0.5 * (cvec(a, cl[0], cl[1], cl[2]) +
                                     cvec(a, cr[0], cr[1], cr[2]));
          out.at(a, i, j, k) = -grad_w - cavg;
        }
  }
  return out;
}

DirectorField director_rhs(const MacVectorField& u, const DirectorField& d,
                           double gamma) {
  const GridSpec& g = d.grid();
  DirectorField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int c = 0; c < 3; ++c)
    for (int k = lo[2]; k < hi[2]; ++k)
      for (int j = lo[1]; j < hi[1]; ++j)
        for (int i = lo[0]; i < hi[0]; ++i) {
          const double adv =
              advect_cell_at(u, d.comp(c), g, AdvectionForm::Advective, i, j, k);
          out.at(c, i, j, k) =
              -adv + gamma * (lap_dir_at(d, c, i, j, k) +
                              grad_sq_at(d, i, j, k) * dir_at(d, c, i, j, k));
        }
  return out;
}

ScalarField velocity_grad_sq(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  ScalarField out(g);
  int lo[3], hi[3];
  cell_bounds(g, lo, hi);
  for (int k = lo[2]; k < hi[2]; ++k)
    for (int j = lo[1]; j < hi[1]; ++j)
      for (int i = lo[0]; i < hi[0]; ++i) {
        double s = 0.0;
        for (int a = 0; a < g.ndim; ++a) {
          int fp[3] = {i, j, k};
          fp[a] += 1;
          const double dn = (face_at(u, a, fp[0], fp[1], fp[2]) -
                             face_at(u, a, i, j, k)) /
                            g.h[a];
          s += dn * dn;
          for (int ax = 0; ax < g.ndim; ++ax) {
            if (ax == a) continue;
            int qp[3] = {i, j, k}, qm[3] = {i, j, k};
            qp[ax] += 1;
            qm[ax] -= 1;
            const double dtang = (center_vel(u, a, qp[0], qp[1], qp[2]) -
                                  center_vel(u, a, qm[0], qm[1], qm[2])) /
                                 (2.0 * g.h[ax]);
            s += dtang * dtang;
          }
        }
        out.at(i, j, k) = s;
      }
  return out;
}

}  // namespace nlc::ref

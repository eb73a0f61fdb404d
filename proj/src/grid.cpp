#include "nlc/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlc/parallel.hpp"

namespace nlc {

#ifdef _OPENMP
void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}
int thread_count() { return omp_get_max_threads(); }
#else
void set_threads(int) {}
int thread_count() { return 1; }
#endif

GridSpec make_grid(std::span<const int> dims, std::span<const double> lengths,
                   BcMode bc) {
  if (dims.size() != 2 && dims.size() != 3)
    throw std::invalid_argument("make_grid: need 2 or 3 axes, got " +
                                std::to_string(dims.size()));
  if (lengths.size() != dims.size())
    throw std::invalid_argument("make_grid: dims/lengths axis count mismatch");
  GridSpec g;
  g.ndim = int(dims.size());
  g.bc = bc;
  for (int a = 0; a < g.ndim; ++a) {
    if (dims[a] < 4)
      throw std::invalid_argument("make_grid: dims must be >= 4 per axis, axis " +
                                  std::to_string(a) + " has " +
                                  std::to_string(dims[a]));
    if (!(lengths[a] > 0.0))
      throw std::invalid_argument("make_grid: lengths must be positive, axis " +
                                  std::to_string(a));
    g.dims[a] = dims[a];
    g.lengths[a] = lengths[a];
    g.h[a] = lengths[a] / double(dims[a]);
  }
  for (int a = g.ndim; a < 3; ++a) {
    g.dims[a] = 1;
    g.lengths[a] = 1.0;
    g.h[a] = 1.0;
  }
  return g;
}

namespace detail {

std::array<int, 3> cell_ghosts(const GridSpec& g) {
  return {2, 2, g.ndim == 3 ? 2 : 0};
}
std::array<int, 3> face_ghosts(const GridSpec& g) {
  return {1, 1, g.ndim == 3 ? 1 : 0};
}
std::array<int, 3> cell_extents(const GridSpec& g) {
  return {g.dims[0], g.dims[1], g.nz()};
}
std::array<int, 3> face_extents(const GridSpec& g, int axis) {
  std::array<int, 3> n = {g.dims[0], g.dims[1], g.nz()};
  n[axis] = g.face_count(axis);
  return n;
}

namespace {

// Per-axis ghost fill. Applying axes in order also populates edge/corner
// ghosts consistently.
template <class Rule>
void fill_axis(Array3& a, int axis, Rule rule) {
  const auto& n = a.extents();
  const auto& gw = a.ghosts();
  if (gw[axis] == 0) return;
  // Sweep over the other two axes, ghost-inclusive, so edge and corner
  // ghosts settle after all axes have been filled in order.
  std::array<int, 3> lo = {-gw[0], -gw[1], -gw[2]};
  std::array<int, 3> hi = {n[0] + gw[0], n[1] + gw[1], n[2] + gw[2]};
  for (int t = 1; t <= gw[axis]; ++t) {
    for (int k = (axis == 2 ? 0 : lo[2]); k < (axis == 2 ? 1 : hi[2]); ++k) {
      for (int j = (axis == 1 ? 0 : lo[1]); j < (axis == 1 ? 1 : hi[1]); ++j) {
        for (int i = (axis == 0 ? 0 : lo[0]); i < (axis == 0 ? 1 : hi[0]);
             ++i) {
          std::array<int, 3> q = {i, j, k};
          auto [src_lo, sign_lo] = rule(-t, n[axis]);
          auto [src_hi, sign_hi] = rule(n[axis] - 1 + t, n[axis]);
          std::array<int, 3> glo = q, ghi = q, slo = q, shi = q;
          glo[axis] = -t;
          ghi[axis] = n[axis] - 1 + t;
          slo[axis] = src_lo;
          shi[axis] = src_hi;
          a.at(glo[0], glo[1], glo[2]) = sign_lo * a.at(slo[0], slo[1], slo[2]);
          a.at(ghi[0], ghi[1], ghi[2]) = sign_hi * a.at(shi[0], shi[1], shi[2]);
        }
      }
    }
  }
}

// index -> (source index, sign) rules
std::pair<int, double> wrap_rule(int i, int n) {
  int s = i % n;
  if (s < 0) s += n;
  return {s, 1.0};
}
std::pair<int, double> mirror_rule(int i, int n) {
  // Even reflection of cell centers across the wall planes at 0 and n.
  if (i < 0) return {-1 - i, 1.0};
  if (i >= n) return {2 * n - 1 - i, 1.0};
  return {i, 1.0};
}
// Tangential velocity: odd reflection across the wall plane midway between
// the ghost row and the first interior row, so the wall average is zero.
std::pair<int, double> odd_cell_rule(int i, int n) {
  if (i < 0) return {-1 - i, -1.0};
  if (i >= n) return {2 * n - 1 - i, -1.0};
  return {i, 1.0};
}
// Normal velocity: odd reflection about the boundary faces at 0 and n; the
// boundary faces themselves are pinned to zero separately.
std::pair<int, double> odd_face_rule(int i, int nfaces) {
  const int last = nfaces - 1;  // face index of the wall at the high end
  if (i < 0) return {-i, -1.0};
  if (i > last) return {2 * last - i, -1.0};
  return {i, 1.0};
}

}  // namespace

void fill_cell_ghosts(Array3& a, const GridSpec& g) {
  for (int axis = 0; axis < g.ndim; ++axis) {
    if (g.bc == BcMode::Periodic)
      fill_axis(a, axis, wrap_rule);
    else
      fill_axis(a, axis, mirror_rule);
  }
}

}  // namespace detail

void apply_scalar_bc(ScalarField& f) {
  detail::fill_cell_ghosts(f.raw(), f.grid());
}

void apply_velocity_component_bc(detail::Array3& comp, int axis,
                                 const GridSpec& g) {
  if (g.bc == BcMode::Periodic) {
    for (int ax = 0; ax < g.ndim; ++ax)
      detail::fill_axis(comp, ax, detail::wrap_rule);
    return;
  }
  // Wall mode: pin the boundary-normal faces to zero first so the odd
  // reflection sees the final values.
  const auto& n = comp.extents();
  {
    const int last = n[axis] - 1;
    std::array<int, 3> lo = {0, 0, 0};
    std::array<int, 3> hi = {n[0], n[1], n[2]};
    for (int k = (axis == 2 ? 0 : lo[2]); k < (axis == 2 ? 1 : hi[2]); ++k)
      for (int j = (axis == 1 ? 0 : lo[1]); j < (axis == 1 ? 1 : hi[1]); ++j)
        for (int i = (axis == 0 ? 0 : lo[0]); i < (axis == 0 ? 1 : hi[0]);
             ++i) {
          std::array<int, 3> q0 = {i, j, k}, q1 = {i, j, k};
          q0[axis] = 0;
          q1[axis] = last;
          comp.at(q0[0], q0[1], q0[2]) = 0.0;
          comp.at(q1[0], q1[1], q1[2]) = 0.0;
        }
  }
  for (int ax = 0; ax < g.ndim; ++ax) {
    if (ax == axis)
      detail::fill_axis(comp, ax, detail::odd_face_rule);
    else
      detail::fill_axis(comp, ax, detail::odd_cell_rule);
  }
}

void apply_velocity_bc(MacVectorField& u) {
  for (int a = 0; a < u.ncomp(); ++a)
    apply_velocity_component_bc(u.comp(a), a, u.grid());
}

void apply_director_bc(DirectorField& d) {
  for (int c = 0; c < 3; ++c) detail::fill_cell_ghosts(d.comp(c), d.grid());
}

void apply_state_bc(State& s) {
  apply_velocity_bc(s.u);
  apply_director_bc(s.d);
  apply_scalar_bc(s.p);
}

void renormalize_director(DirectorField& d) {
  const GridSpec& g = d.grid();
  const int nx = g.dims[0], ny = g.dims[1], nzv = g.nz();
#ifdef _OPENMP
#pragma omp parallel for collapse(2) schedule(static) if (std::int64_t(nzv)* ny* nx > 4096)
#endif
  for (int k = 0; k < nzv; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const double m = std::sqrt(d.at(0, i, j, k) * d.at(0, i, j, k) +
                                   d.at(1, i, j, k) * d.at(1, i, j, k) +
                                   d.at(2, i, j, k) * d.at(2, i, j, k));
        if (m > 0.0) {
          d.at(0, i, j, k) /= m;
          d.at(1, i, j, k) /= m;
          d.at(2, i, j, k) /= m;
        }
      }
  apply_director_bc(d);
}

namespace {

double array_sq_sum(const detail::Array3& a) {
  const auto& n = a.extents();
  return nlc::detail::parallel_sum(a.interior_count(), [&](std::int64_t e) {
    const auto q = a.decode(e);
    const double v = a.at(q[0], q[1], q[2]);
    return v * v;
  });
  (void)n;
}

double array_abs_max(const detail::Array3& a) {
  return nlc::detail::parallel_max(a.interior_count(), [&](std::int64_t e) {
    const auto q = a.decode(e);
    return std::abs(a.at(q[0], q[1], q[2]));
  });
}

}  // namespace

double field_l2(const ScalarField& f) {
  return std::sqrt(f.grid().cell_volume() * array_sq_sum(f.raw()));
}

double field_l2(const MacVectorField& u) {
  double s = 0.0;
  for (int a = 0; a < u.ncomp(); ++a) s += array_sq_sum(u.comp(a));
  return std::sqrt(u.grid().cell_volume() * s);
}

double field_l2(const DirectorField& d) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) s += array_sq_sum(d.comp(c));
  return std::sqrt(d.grid().cell_volume() * s);
}

double field_linf(const ScalarField& f) { return array_abs_max(f.raw()); }

double field_linf(const MacVectorField& u) {
  double m = 0.0;
  for (int a = 0; a < u.ncomp(); ++a) {
    const double v = array_abs_max(u.comp(a));
    if (v > m) m = v;
  }
  return m;
}

double field_mean(const ScalarField& f) {
  const auto& a = f.raw();
  const double s = nlc::detail::parallel_sum(
      a.interior_count(), [&](std::int64_t e) {
        const auto q = a.decode(e);
        return a.at(q[0], q[1], q[2]);
      });
  return s / double(a.interior_count());
}

double velocity_linf_center(const MacVectorField& u) {
  const GridSpec& g = u.grid();
  const auto cells = detail::cell_extents(g);
  const std::int64_t n = std::int64_t(cells[0]) * cells[1] * cells[2];
  return nlc::detail::parallel_max(n, [&](std::int64_t e) {
    const int i = int(e % cells[0]);
    const int j = int((e / cells[0]) % cells[1]);
    const int k = int(e / (std::int64_t(cells[0]) * cells[1]));
    double s = 0.0;
    for (int a = 0; a < g.ndim; ++a) {
      std::array<int, 3> q = {i, j, k};
      const double lo = u.at(a, q[0], q[1], q[2]);
      q[a] += 1;
      const double hi = u.at(a, q[0], q[1], q[2]);
      const double c = 0.5 * (lo + hi);
      s += c * c;
    }
    return std::sqrt(s);
  });
}

}  // namespace nlc

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace nlc {

enum class BcMode { Wall, Periodic };

/// Uniform Cartesian box on 2 or 3 axes. Wall mode means no-slip velocity and
/// homogeneous Neumann director/scalar conditions, realized through ghost
/// layers; Periodic wraps every index.
struct GridSpec {
  int ndim = 2;
  std::array<int, 3> dims{1, 1, 1};        // cells per axis (tail = 1)
  std::array<double, 3> lengths{1, 1, 1};  // box size per axis
  std::array<double, 3> h{1, 1, 1};        // spacing, lengths/dims
  BcMode bc = BcMode::Periodic;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

  int nz() const { return ndim == 3 ? dims[2] : 1; }
  std::int64_t cell_count() const {
    return std::int64_t(dims[0]) * dims[1] * nz();
  }
  double cell_volume() const {
    double v = h[0] * h[1];
    return ndim == 3 ? v * h[2] : v;
  }
  double volume() const { return cell_volume() * double(cell_count()); }
  /// Number of distinct stored faces normal to `axis` along that axis.
  int face_count(int axis) const {
    return bc == BcMode::Wall ? dims[axis] + 1 : dims[axis];
  }
  double cell_center(int axis, int i) const { return (i + 0.5) * h[axis]; }
  double face_coord(int axis, int i) const { return i * h[axis]; }
};

/// Builds a validated GridSpec. Throws std::invalid_argument for dims < 4 on
/// any axis (stencils undefined below that) or non-positive lengths.
GridSpec make_grid(std::span<const int> dims, std::span<const double> lengths,
                   BcMode bc);

namespace detail {

/// Flat 3D array with per-axis ghost rings. Interior extents `n`, ghost
/// widths `gw`; index arguments may range over [-gw, n+gw).
class Array3 {
 public:
  Array3() = default;
  Array3(std::array<int, 3> n, std::array<int, 3> gw) { reset(n, gw); }

  void reset(std::array<int, 3> n, std::array<int, 3> gw, double value = 0.0) {
    n_ = n;
    gw_ = gw;
    const int px = n[0] + 2 * gw[0], py = n[1] + 2 * gw[1],
              pz = n[2] + 2 * gw[2];
    sx_ = 1;
    sy_ = px;
    sz_ = px * py;
    base_ = gw[0] * sx_ + gw[1] * sy_ + gw[2] * sz_;
    v_.assign(std::size_t(px) * py * pz, value);
  }

  double& at(int i, int j, int k = 0) {
    return v_[std::size_t(base_ + i * sx_ + j * sy_ + k * sz_)];
  }
  double at(int i, int j, int k = 0) const {
    return v_[std::size_t(base_ + i * sx_ + j * sy_ + k * sz_)];
  }

  const std::array<int, 3>& extents() const { return n_; }
  const std::array<int, 3>& ghosts() const { return gw_; }
  std::int64_t interior_count() const {
    return std::int64_t(n_[0]) * n_[1] * n_[2];
  }
  void fill(double value) { v_.assign(v_.size(), value); }

  // Linear enumeration of interior points, used by reductions and solvers.
  // decode(e) -> (i,j,k) is i-fastest.
  std::array<int, 3> decode(std::int64_t e) const {
    const int i = int(e % n_[0]);
    const int j = int((e / n_[0]) % n_[1]);
    const int k = int(e / (std::int64_t(n_[0]) * n_[1]));
    return {i, j, k};
  }

 private:
  std::array<int, 3> n_{0, 0, 0};
  std::array<int, 3> gw_{0, 0, 0};
  int sx_ = 0, sy_ = 0, sz_ = 0, base_ = 0;
  std::vector<double> v_;
};

/// Ghost widths used across the project: cell-centered data carries two rings
/// (the stress assembly differentiates the gradient tensor on ring one), face
/// data carries one.
std::array<int, 3> cell_ghosts(const GridSpec& g);
std::array<int, 3> face_ghosts(const GridSpec& g);
std::array<int, 3> cell_extents(const GridSpec& g);
std::array<int, 3> face_extents(const GridSpec& g, int axis);

/// Fills ghost rings of a cell-centered array: wraparound (Periodic) or even
/// mirror across the wall plane (Wall, second-order homogeneous Neumann).
void fill_cell_ghosts(Array3& a, const GridSpec& g);

}  // namespace detail

/// Cell-centered scalar field (pressure, |grad d|^2, Poisson unknowns).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double value = 0.0)
      : grid_(g), a_(detail::cell_extents(g), detail::cell_ghosts(g)) {
    if (value != 0.0) a_.fill(value);
  }
  const GridSpec& grid() const { return grid_; }
  double& at(int i, int j, int k = 0) { return a_.at(i, j, k); }
  double at(int i, int j, int k = 0) const { return a_.at(i, j, k); }
  detail::Array3& raw() { return a_; }
  const detail::Array3& raw() const { return a_; }

 private:
  GridSpec grid_;
  detail::Array3 a_;
};

/// MAC velocity: component `axis` lives on faces normal to that axis. In Wall
/// mode the two boundary faces per axis are stored and pinned to zero; in
/// Periodic mode only the dims[axis] distinct faces are stored.
class MacVectorField {
 public:
  MacVectorField() = default;
  explicit MacVectorField(const GridSpec& g) : grid_(g) {
    for (int a = 0; a < g.ndim; ++a)
      c_[a].reset(detail::face_extents(g, a), detail::face_ghosts(g));
  }
  const GridSpec& grid() const { return grid_; }
  int ncomp() const { return grid_.ndim; }
  double& at(int axis, int i, int j, int k = 0) { return c_[axis].at(i, j, k); }
  double at(int axis, int i, int j, int k = 0) const {
    return c_[axis].at(i, j, k);
  }
  detail::Array3& comp(int axis) { return c_[axis]; }
  const detail::Array3& comp(int axis) const { return c_[axis]; }

 private:
  GridSpec grid_;
  std::array<detail::Array3, 3> c_;
};

/// Director field: three cell-centered components regardless of the domain
/// dimension (d lives on the unit sphere in R^3).
class DirectorField {
 public:
  DirectorField() = default;
  explicit DirectorField(const GridSpec& g,
                         std::array<double, 3> value = {0, 0, 0})
      : grid_(g) {
    for (int c = 0; c < 3; ++c) {
      c_[c].reset(detail::cell_extents(g), detail::cell_ghosts(g));
      if (value[c] != 0.0) c_[c].fill(value[c]);
    }
  }
  const GridSpec& grid() const { return grid_; }
  double& at(int c, int i, int j, int k = 0) { return c_[c].at(i, j, k); }
  double at(int c, int i, int j, int k = 0) const { return c_[c].at(i, j, k); }
  detail::Array3& comp(int c) { return c_[c]; }
  const detail::Array3& comp(int c) const { return c_[c]; }

 private:
  GridSpec grid_;
  std::array<detail::Array3, 3> c_;
};

struct State {
  MacVectorField u;
  DirectorField d;
  ScalarField p;
  double t = 0.0;

  State() = default;
  explicit State(const GridSpec& g, std::array<double, 3> d0 = {0, 0, 1})
      : u(g), d(g, d0), p(g), t(0.0) {}
  const GridSpec& grid() const { return u.grid(); }
};

// --- Boundary conditions ------------------------------------------------

/// Refreshes scalar ghosts (mirror in Wall mode, wrap in Periodic).
void apply_scalar_bc(ScalarField& f);

/// Wall: zeroes normal components on boundary faces and sets ghost layers by
/// odd reflection so the interpolated wall velocity vanishes. Periodic: only
/// refreshes the wraparound ghosts (the no-slip part is a no-op).
void apply_velocity_bc(MacVectorField& u);
void apply_velocity_component_bc(detail::Array3& comp, int axis,
                                 const GridSpec& g);

/// Wall: even mirror ghosts (zero normal derivative, second-order).
/// Periodic: wraparound. No-op on interior values in both modes.
void apply_director_bc(DirectorField& d);

void apply_state_bc(State& s);

/// Divides every cell's director by its magnitude. Never called implicitly.
void renormalize_director(DirectorField& d);

// --- Quadrature-weighted norms and reductions ----------------------------

double field_l2(const ScalarField& f);
double field_l2(const MacVectorField& u);   // over stored faces
double field_l2(const DirectorField& d);
double field_linf(const ScalarField& f);
double field_linf(const MacVectorField& u);
double field_mean(const ScalarField& f);
/// Maximum cell magnitude of the center-interpolated velocity vector.
double velocity_linf_center(const MacVectorField& u);

}  // namespace nlc

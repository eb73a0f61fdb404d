#include "nlc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlc {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void write_array_interior(std::ofstream& out, const detail::Array3& a) {
  const auto& n = a.extents();
  std::vector<double> row(static_cast<std::size_t>(n[0]));
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) row[std::size_t(i)] = a.at(i, j, k);
      out.write(reinterpret_cast<const char*>(row.data()),
                std::streamsize(row.size() * sizeof(double)));
    }
}

void read_array_interior(std::ifstream& in, detail::Array3& a) {
  const auto& n = a.extents();
  std::vector<double> row(static_cast<std::size_t>(n[0]));
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j) {
      in.read(reinterpret_cast<char*>(row.data()),
              std::streamsize(row.size() * sizeof(double)));
      if (!in) throw std::runtime_error("snapshot binary truncated");
      for (int i = 0; i < n[0]; ++i) a.at(i, j, k) = row[std::size_t(i)];
    }
}

}  // namespace

void write_snapshot(const std::string& base, const State& s,
                    const std::string& manifest_hash) {
  const GridSpec& g = s.grid();
  auto hdr = open_out(base + ".txt");
  hdr << "nematicflow snapshot v1\n";
  hdr << "manifest: " << manifest_hash << "\n";
  hdr << "ndim: " << g.ndim << "\n";
  hdr << "dims:";
  for (int a = 0; a < g.ndim; ++a) hdr << " " << g.dims[a];
  hdr << "\nlengths:";
  for (int a = 0; a < g.ndim; ++a) hdr << " " << g17(g.lengths[a]);
  hdr << "\nbc: " << (g.bc == BcMode::Wall ? "wall" : "periodic") << "\n";
  hdr << "time: " << g17(s.t) << "\n";
  hdr << "layout: float64 x-fastest interior\n";
  hdr << "components:";
  for (int a = 0; a < g.ndim; ++a) hdr << " u" << a;
  hdr << " d0 d1 d2 p\n";
  for (int a = 0; a < g.ndim; ++a) {
    const auto& n = s.u.comp(a).extents();
    hdr << "shape u" << a << ": " << n[0] << " " << n[1] << " " << n[2] << "\n";
  }
  for (int c = 0; c < 3; ++c) {
    const auto& n = s.d.comp(c).extents();
    hdr << "shape d" << c << ": " << n[0] << " " << n[1] << " " << n[2] << "\n";
  }
  {
    const auto& n = s.p.raw().extents();
    hdr << "shape p: " << n[0] << " " << n[1] << " " << n[2] << "\n";
  }

  auto bin = open_out(base + ".bin", /*binary=*/true);
  for (int a = 0; a < g.ndim; ++a) write_array_interior(bin, s.u.comp(a));
  for (int c = 0; c < 3; ++c) write_array_interior(bin, s.d.comp(c));
  write_array_interior(bin, s.p.raw());
}

State read_snapshot(const std::string& base) {
  std::ifstream hdr(base + ".txt");
  if (!hdr) throw std::runtime_error("cannot open '" + base + ".txt'");
  std::string line;
  int ndim = 0;
  std::vector<int> dims;
  std::vector<double> lengths;
  BcMode bc = BcMode::Periodic;
  double t = 0.0;
  while (std::getline(hdr, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "ndim:") ls >> ndim;
    else if (key == "dims:") {
      int v;
      while (ls >> v) dims.push_back(v);
    } else if (key == "lengths:") {
      double v;
      while (ls >> v) lengths.push_back(v);
    } else if (key == "bc:") {
      std::string m;
      ls >> m;
      bc = m == "wall" ? BcMode::Wall : BcMode::Periodic;
    } else if (key == "time:") {
      ls >> t;
    }
  }
  if (ndim != int(dims.size()) || dims.empty())
    throw std::runtime_error("snapshot header malformed: " + base + ".txt");
  const GridSpec g = make_grid(dims, lengths, bc);
  State s(g, {0, 0, 0});
  s.t = t;
  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open '" + base + ".bin'");
  for (int a = 0; a < g.ndim; ++a) read_array_interior(bin, s.u.comp(a));
  for (int c = 0; c < 3; ++c) read_array_interior(bin, s.d.comp(c));
  read_array_interior(bin, s.p.raw());
  apply_state_bc(s);
  return s;
}

void write_vtk(const std::string& path, const State& s,
               const std::string& manifest_hash) {
  const GridSpec& g = s.grid();
  auto out = open_out(path);
  out << "# vtk DataFile Version 2.0\n";
  out << "nematicflow state, manifest=" << manifest_hash << ", t=" << g17(s.t)
      << "\n";
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.dims[0] + 1 << " " << g.dims[1] + 1 << " "
      << (g.ndim == 3 ? g.dims[2] + 1 : 1) << "\n";
  out << "ORIGIN 0 0 0\n";
  out << "SPACING " << g17(g.h[0]) << " " << g17(g.h[1]) << " "
      << g17(g.ndim == 3 ? g.h[2] : 1.0) << "\n";
  out << "CELL_DATA " << g.cell_count() << "\n";

  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) out << g17(s.p.at(i, j, k)) << "\n";

  out << "VECTORS velocity double\n";
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) {
        double v[3] = {0, 0, 0};
        for (int a = 0; a < g.ndim; ++a) {
          int fp[3] = {i, j, k};
          fp[a] += 1;
          v[a] = 0.5 * (s.u.at(a, i, j, k) + s.u.at(a, fp[0], fp[1], fp[2]));
        }
        out << g17(v[0]) << " " << g17(v[1]) << " " << g17(v[2]) << "\n";
      }

  out << "VECTORS director double\n";
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i)
        out << g17(s.d.at(0, i, j, k)) << " " << g17(s.d.at(1, i, j, k)) << " "
            << g17(s.d.at(2, i, j, k)) << "\n";
}

void write_energy_csv(const std::string& path,
                      const std::vector<EnergyRecord>& records,
                      const std::string& manifest_hash) {
  auto out = open_out(path);
  out << "# manifest=" << manifest_hash << "\n";
  out << "t,E,D,residual,drift,U0_proxy\n";
  for (const auto& r : records)
    out << g17(r.t) << "," << g17(r.energy) << "," << g17(r.dissipation) << ","
        << g17(r.residual) << "," << g17(r.drift) << "," << g17(r.u0_proxy)
        << "\n";
}

void write_picard_csv(const std::string& path,
                      const std::vector<PicardReport>& reports,
                      const std::string& manifest_hash) {
  auto out = open_out(path);
  out << "# manifest=" << manifest_hash << "\n";
  out << "slab_index,iter,U_bar,ratio,halvings\n";
  for (std::size_t slab = 0; slab < reports.size(); ++slab) {
    int level = 0;
    for (const auto& attempt : reports[slab].attempts) {
      for (std::size_t it = 0; it < attempt.u_bars.size(); ++it) {
        const double ratio = it == 0 ? 0.0 : attempt.ratios[it - 1];
        out << slab << "," << it << "," << g17(attempt.u_bars[it]) << ","
            << g17(ratio) << "," << level << "\n";
      }
      ++level;
    }
  }
}

void write_rel_energy_csv(const std::string& path,
                          const std::vector<RelEnergyRecord>& records,
                          const std::string& manifest_hash) {
  auto out = open_out(path);
  out << "# manifest=" << manifest_hash << "\n";
  out << "t,R,phi,envelope\n";
  for (const auto& r : records)
    out << g17(r.t) << "," << g17(r.rel_energy) << "," << g17(r.phi) << ","
        << g17(r.envelope) << "\n";
}

void write_mms_csv(const std::string& path, const std::vector<MmsRow>& rows,
                   const std::string& manifest_hash) {
  auto out = open_out(path);
  out << "# manifest=" << manifest_hash << "\n";
  out << "h,dt,err_u_L2,err_d_L2,order_u,order_d\n";
  for (const auto& r : rows)
    out << g17(r.h) << "," << g17(r.dt) << "," << g17(r.err_u) << ","
        << g17(r.err_d) << "," << g17(r.order_u) << "," << g17(r.order_d)
        << "\n";
}

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows,
                     const std::string& manifest_hash) {
  auto out = open_out(path);
  out << "# manifest=" << manifest_hash << "\n";
  out << "slab_T,eps,iters,terminal_ratio,max_ratio,converged,halvings\n";
  for (const auto& r : rows)
    out << g17(r.slab_T) << "," << g17(r.eps) << "," << r.iters << ","
        << g17(r.terminal_ratio) << "," << g17(r.max_ratio) << ","
        << (r.converged ? 1 : 0) << "," << r.halvings << "\n";
}

void write_manifest(const std::string& path, const std::string& manifest_hash,
                    const std::string& command, const std::string& config_text,
                    std::uint64_t seed, int threads, double wall_seconds,
                    const std::vector<std::string>& artifacts) {
  auto out = open_out(path);
  out << "manifest: " << manifest_hash << "\n";
  out << "tool: nlcflow " << kToolVersion << "\n";
  out << "command: " << command << "\n";
  out << "seed: " << seed << "\n";
  out << "threads: " << threads << "\n";
  out << "wall_seconds: " << g17(wall_seconds) << "\n";
  out << "artifacts:\n";
  for (const auto& a : artifacts) out << "  - " << a << "\n";
  out << "config: |\n";
  std::istringstream cfg(config_text);
  std::string line;
  while (std::getline(cfg, line)) out << "  " << line << "\n";
}

}  // namespace nlc

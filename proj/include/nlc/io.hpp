#pragma once

#include <string>
#include <vector>

#include "nlc/diagnostics.hpp"
#include "nlc/grid.hpp"
#include "nlc/stepper.hpp"

namespace nlc {

inline constexpr const char* kToolVersion = "1.0.0";

/// Field snapshot: <base>.txt plain-text header plus <base>.bin with each
/// component's interior values as native float64, x fastest then y then z.
void write_snapshot(const std::string& base, const State& s,
                    const std::string& manifest_hash);
State read_snapshot(const std::string& base);

/// Legacy-VTK structured-points file with cell data (pressure, cell-centered
/// velocity, director) for visualization.
void write_vtk(const std::string& path, const State& s,
               const std::string& manifest_hash);

// CSV emitters. Every file starts with "# manifest=<hash>" and a fixed
// header row; numbers are printed with 17 significant digits.
void write_energy_csv(const std::string& path,
                      const std::vector<EnergyRecord>& records,
                      const std::string& manifest_hash);
void write_picard_csv(const std::string& path,
                      const std::vector<PicardReport>& reports,
                      const std::string& manifest_hash);
void write_rel_energy_csv(const std::string& path,
                          const std::vector<RelEnergyRecord>& records,
                          const std::string& manifest_hash);

struct MmsRow {
  double h = 0, dt = 0, err_u = 0, err_d = 0, order_u = 0, order_d = 0;
};
void write_mms_csv(const std::string& path, const std::vector<MmsRow>& rows,
                   const std::string& manifest_hash);

struct StudyRow {
  double slab_T = 0, eps = 0;
  int iters = 0;
  double terminal_ratio = 0, max_ratio = 0;
  bool converged = false;
  int halvings = 0;
};
void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows,
                     const std::string& manifest_hash);

/// Run manifest: hash, tool version, command, seed, threads, wall time, the
/// canonical config, and the artifact list.
void write_manifest(const std::string& path, const std::string& manifest_hash,
                    const std::string& command, const std::string& config_text,
                    std::uint64_t seed, int threads, double wall_seconds,
                    const std::vector<std::string>& artifacts);

}  // namespace nlc

#pragma once

#include "chemotaxis/aplimit.hpp"
#include "chemotaxis/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace chemotaxis {

/// Version string compiled into the library.
std::string code_version();

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Snapshot table with header x,rho,u,phi, one row per cell center.
void write_snapshot_csv(std::ostream& os, const Snapshot& s);
/// Series table with header t,residual,mass,bumps.
void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& series);
/// eps,error_conservative,error_nonconservative
void write_ap_table_csv(std::ostream& os, const ApProbeResult& result);
/// dx,cells,bumps,distance_to_next,steps,converged,final_residual
void write_mesh_table_csv(std::ostream& os, const MeshStudy& study);
/// One "key = value" line per entry; parse_config reads the config part back.
void write_key_values(std::ostream& os, const KeyValues& entries);

/// Config entries followed by code_version, wall_seconds, steps and the run outcome.
KeyValues run_metadata(const RunReport& report);

/// File variants; parent directories are created. Throw std::runtime_error on I/O failure.
void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& s);
void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesPoint>& series);
void write_ap_table_csv(const std::filesystem::path& path, const ApProbeResult& result);
void write_mesh_table_csv(const std::filesystem::path& path, const MeshStudy& study);
void write_key_values(const std::filesystem::path& path, const KeyValues& entries);

/// Writes <prefix>final.csv, <prefix>series.csv, <prefix>meta.txt and one
/// <prefix>snap_<k>.csv per stored snapshot into dir.
void write_run(const std::filesystem::path& dir, const std::string& prefix, const RunReport& report);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

}  // namespace chemotaxis

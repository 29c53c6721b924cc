#include "chemotaxis/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

#ifndef CHEMOTAXIS_VERSION
#define CHEMOTAXIS_VERSION "unknown"
#endif

namespace chemotaxis {

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    writer(os);
    os.flush();
    if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

std::string initial_datum_tag(const ExperimentConfig& cfg)
{
    // Concatenated bumps are only initial data, not an asserted steady state.
    switch (cfg.initial) {
    case InitialKind::TwoBumps: return "initial datum";
    case InitialKind::Constant:
    case InitialKind::HalfBump:
    case InitialKind::CentralBump: return "steady state";
    case InitialKind::Sinusoid: break;
    }
    return "initial datum";
}

}  // namespace

std::string code_version() { return CHEMOTAXIS_VERSION; }

std::string format_number(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_snapshot_csv(std::ostream& os, const Snapshot& s)
{
    const Grid& g = s.rho.grid();
    os << "x,rho,u,phi\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        os << format_number(g.center(i)) << ',' << format_number(s.rho[i]) << ',' << format_number(s.u[i]) << ','
           << format_number(s.phi[i]) << '\n';
}

void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& series)
{
    os << "t,residual,mass,bumps\n";
    for (const SeriesPoint& p : series)
        os << format_number(p.t) << ',' << format_number(p.residual) << ',' << format_number(p.mass) << ','
           << p.bumps << '\n';
}

void write_ap_table_csv(std::ostream& os, const ApProbeResult& result)
{
    os << "eps,error_conservative,error_nonconservative\n";
    for (const ApProbeRow& r : result.rows)
        os << format_number(r.eps) << ',' << format_number(r.error_conservative) << ','
           << format_number(r.error_nonconservative) << '\n';
}

void write_mesh_table_csv(std::ostream& os, const MeshStudy& study)
{
    os << "dx,cells,bumps,distance_to_next,steps,converged,final_residual\n";
    for (std::size_t k = 0; k < study.reports.size(); ++k) {
        const RunReport& r = study.reports[k];
        const double dist = k < study.distance_to_next.size() ? study.distance_to_next[k] : 0.0;
        const double res = r.series.empty() ? 0.0 : r.series.back().residual;
        os << format_number(study.dx[k]) << ',' << r.config.cells << ',' << study.bumps[k] << ','
           << format_number(dist) << ',' << r.steps << ',' << (r.converged ? 1 : 0) << ',' << format_number(res)
           << '\n';
    }
}

void write_key_values(std::ostream& os, const KeyValues& entries)
{
    for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
}

KeyValues run_metadata(const RunReport& report)
{
    KeyValues kv = config_entries(report.config);
    const BumpCount bumps = report.final_bumps();
    kv.emplace_back("code_version", code_version());
    kv.emplace_back("wall_seconds", format_number(report.wall_seconds));
    kv.emplace_back("initial_datum", initial_datum_tag(report.config));
    kv.emplace_back("steps", std::to_string(report.steps));
    kv.emplace_back("final_time", format_number(report.final_state.t));
    kv.emplace_back("converged", report.converged ? "true" : "false");
    kv.emplace_back("final_residual", format_number(report.series.empty() ? 0.0 : report.series.back().residual));
    kv.emplace_back("final_bumps", std::to_string(bumps.count));
    kv.emplace_back("final_wall_bumps", std::to_string(bumps.wall_touching));
    kv.emplace_back("final_momentum_max", format_number(report.final_momentum_max()));
    kv.emplace_back("initial_mass", format_number(report.initial_mass));
    kv.emplace_back("max_mass_drift", format_number(report.max_mass_drift));
    kv.emplace_back("min_rho", format_number(report.min_rho));
    return kv;
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& s)
{
    write_file(path, [&](std::ostream& os) { write_snapshot_csv(os, s); });
}

void write_series_csv(const std::filesystem::path& path, const std::vector<SeriesPoint>& series)
{
    write_file(path, [&](std::ostream& os) { write_series_csv(os, series); });
}

void write_ap_table_csv(const std::filesystem::path& path, const ApProbeResult& result)
{
    write_file(path, [&](std::ostream& os) { write_ap_table_csv(os, result); });
}

void write_mesh_table_csv(const std::filesystem::path& path, const MeshStudy& study)
{
    write_file(path, [&](std::ostream& os) { write_mesh_table_csv(os, study); });
}

void write_key_values(const std::filesystem::path& path, const KeyValues& entries)
{
    write_file(path, [&](std::ostream& os) { write_key_values(os, entries); });
}

void write_run(const std::filesystem::path& dir, const std::string& prefix, const RunReport& report)
{
    write_snapshot_csv(dir / (prefix + "final.csv"), report.final_state);
    write_series_csv(dir / (prefix + "series.csv"), report.series);
    write_key_values(dir / (prefix + "meta.txt"), run_metadata(report));
    for (std::size_t k = 0; k < report.snapshots.size(); ++k)
        write_snapshot_csv(dir / (prefix + "snap_" + std::to_string(k) + ".csv"), report.snapshots[k]);
}

}  // namespace chemotaxis

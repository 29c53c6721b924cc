#include "chemotaxis/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace chemotaxis;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t line_count(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunReport small_run()
{
    ExperimentConfig c = preset("unit-box");
    c.cells = 20;
    c.t_end = 0.2;
    c.snapshot_interval = 0.1;
    c.execution = Execution::Serial;
    return run(c);
}

}  // namespace

TEST_CASE("numbers print in shortest round-trip form")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(code_version() == "1.0.0");
}

TEST_CASE("csv tables have the documented headers")
{
    const RunReport r = small_run();
    std::ostringstream snap, series;
    write_snapshot_csv(snap, r.final_state);
    write_series_csv(series, r.series);
    CHECK(first_line(snap.str()) == "x,rho,u,phi");
    CHECK(line_count(snap.str()) == 21);
    CHECK(first_line(series.str()) == "t,residual,mass,bumps");
    CHECK(line_count(series.str()) == r.series.size() + 1);

    ApProbeResult ap;
    ap.rows = {{0.1, 1.0, 2.0}, {0.01, 0.1, 0.2}};
    std::ostringstream apt;
    write_ap_table_csv(apt, ap);
    CHECK(apt.str() == "eps,error_conservative,error_nonconservative\n0.1,1,2\n0.01,0.1,0.2\n");

    MeshStudy study;
    study.reports = {r};
    study.dx = {0.05};
    study.bumps = {1};
    std::ostringstream mesh;
    write_mesh_table_csv(mesh, study);
    CHECK(first_line(mesh.str()) == "dx,cells,bumps,distance_to_next,steps,converged,final_residual");
    CHECK(line_count(mesh.str()) == 2);
}

TEST_CASE("metadata carries the config, version and wall time")
{
    const RunReport r = small_run();
    const KeyValues kv = run_metadata(r);
    auto value = [&](const std::string& key) {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        FAIL("missing key " << key);
        return std::string();
    };
    CHECK(value("preset") == "unit-box");
    CHECK(value("chi") == "50");
    CHECK(value("cells") == "20");
    CHECK(value("code_version") == "1.0.0");
    CHECK(std::stod(value("wall_seconds")) >= 0.0);
    CHECK(value("initial_datum") == "initial datum");
    CHECK(value("steps") == std::to_string(r.steps));
    CHECK(value("final_time") == "0.2");

    std::ostringstream os;
    write_key_values(os, config_entries(r.config));
    CHECK(config_entries(parse_config(os.str())) == config_entries(r.config));

    RunReport steady = r;
    steady.config.initial = InitialKind::HalfBump;
    const KeyValues skv = run_metadata(steady);
    bool tagged = false;
    for (const auto& [k, v] : skv) tagged = tagged || (k == "initial_datum" && v == "steady state");
    CHECK(tagged);
}

TEST_CASE("write_run creates the output files")
{
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "chemotaxis_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const RunReport r = small_run();
    write_run(dir, "case_", r);
    CHECK(first_line(slurp(dir / "case_final.csv")) == "x,rho,u,phi");
    CHECK(first_line(slurp(dir / "case_series.csv")) == "t,residual,mass,bumps");
    CHECK(slurp(dir / "case_meta.txt").find("code_version = 1.0.0") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "case_snap_0.csv"));
    CHECK(r.snapshots.size() == 1);
    std::filesystem::remove_all(dir.parent_path());
    CHECK_THROWS(write_key_values(std::filesystem::path("/proc/forbidden/meta.txt"), KeyValues{}));
}

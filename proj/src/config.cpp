#include "chemotaxis/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace chemotaxis {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last || !std::isfinite(out))
        throw ConfigError("key '" + key + "': '" + value + "' is not a finite number");
    return out;
}

long long parse_integer(const std::string& key, const std::string& value)
{
    long long out = 0;
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), last, out);
    if (ec != std::errc() || ptr != last) throw ConfigError("key '" + key + "': '" + value + "' is not an integer");
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class Fn>
void translate(const std::string& key, Fn&& fn)
{
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

Setter number(double ExperimentConfig::*field)
{
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}

Setter param(double ModelParams::*field)
{
    return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
        c.params.*field = parse_double(k, v);
    };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"model",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v == "hyperbolic")
                 c.model = ModelKind::Hyperbolic;
             else if (v == "parabolic")
                 c.model = ModelKind::Parabolic;
             else
                 throw ConfigError("key '" + k + "': expected hyperbolic or parabolic, got '" + v + "'");
         }},
        {"kappa", param(&ModelParams::kappa)},
        {"gamma", param(&ModelParams::gamma)},
        {"chi", param(&ModelParams::chi)},
        {"alpha", param(&ModelParams::alpha)},
        {"D", param(&ModelParams::D)},
        {"a", param(&ModelParams::a)},
        {"b", param(&ModelParams::b)},
        {"delta",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.params.delta = static_cast<int>(parse_integer(k, v));
         }},
        {"length", number(&ExperimentConfig::length)},
        {"cells",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             const long long n = parse_integer(k, v);
             if (n < 4) throw ConfigError("key 'cells' must be at least 4");
             c.cells = static_cast<std::size_t>(n);
         }},
        {"flux",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             translate(k, [&] { c.scheme.flux.type = flux_type_from_string(v); });
         }},
        {"suliciu_alpha",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scheme.flux.suliciu_alpha = parse_double(k, v);
         }},
        {"reconstruction",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             translate(k, [&] { c.scheme.reconstruction = reconstruction_from_string(v); });
         }},
        {"damping",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             translate(k, [&] { c.scheme.damping = damping_from_string(v); });
         }},
        {"cfl",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.scheme.cfl_factor = parse_double(k, v);
         }},
        {"dt_max",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.scheme.dt_max = parse_double(k, v); }},
        {"beta", number(&ExperimentConfig::beta)},
        {"safety", number(&ExperimentConfig::safety)},
        {"initial",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             static const std::map<std::string, InitialKind> kinds = {{"sinusoid", InitialKind::Sinusoid},
                                                                      {"constant", InitialKind::Constant},
                                                                      {"two-bumps", InitialKind::TwoBumps},
                                                                      {"half-bump", InitialKind::HalfBump},
                                                                      {"central-bump", InitialKind::CentralBump}};
             const auto it = kinds.find(v);
             if (it == kinds.end()) throw ConfigError("key '" + k + "': unknown initial datum '" + v + "'");
             c.initial = it->second;
         }},
        {"rho_mean", number(&ExperimentConfig::rho_mean)},
        {"mass", number(&ExperimentConfig::mass)},
        {"mass_left", number(&ExperimentConfig::mass_left)},
        {"mass_right", number(&ExperimentConfig::mass_right)},
        {"bump_length", number(&ExperimentConfig::bump_length)},
        {"t_end", number(&ExperimentConfig::t_end)},
        {"output_interval", number(&ExperimentConfig::output_interval)},
        {"stop_threshold", number(&ExperimentConfig::stop_threshold)},
        {"stop_count",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             c.stop_count = static_cast<int>(parse_integer(k, v));
         }},
        {"bump_threshold", number(&ExperimentConfig::bump_threshold)},
        {"snapshot_interval", number(&ExperimentConfig::snapshot_interval)},
        {"execution",
         [](ExperimentConfig& c, const std::string& k, const std::string& v) {
             if (v == "serial")
                 c.execution = Execution::Serial;
             else if (v == "parallel")
                 c.execution = Execution::Parallel;
             else
                 throw ConfigError("key '" + k + "': expected serial or parallel, got '" + v + "'");
         }},
    };
    return table;
}

void set_dx(ExperimentConfig& cfg, const std::string& value)
{
    const double dx = parse_double("dx", value);
    if (!(dx > 0.0)) throw ConfigError("key 'dx' must be positive");
    const double n = std::round(cfg.length / dx);
    if (n < 4.0) throw ConfigError("key 'dx' leaves fewer than 4 cells");
    if (std::abs(n * dx - cfg.length) > 1e-9 * cfg.length)
        throw ConfigError("key 'dx': " + value + " does not divide the domain length " + fmt(cfg.length));
    cfg.cells = static_cast<std::size_t>(n);
}

}  // namespace

std::string to_string(ModelKind m) { return m == ModelKind::Hyperbolic ? "hyperbolic" : "parabolic"; }

std::string to_string(InitialKind k)
{
    switch (k) {
    case InitialKind::Sinusoid: return "sinusoid";
    case InitialKind::Constant: return "constant";
    case InitialKind::TwoBumps: return "two-bumps";
    case InitialKind::HalfBump: return "half-bump";
    case InitialKind::CentralBump: return "central-bump";
    }
    return "unknown";
}

void ExperimentConfig::validate() const
{
    try {
        params.validate();
        (void)params.law();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(length > 0.0)) throw ConfigError("length must be positive");
    if (cells < 4) throw ConfigError("cells must be at least 4");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(output_interval > 0.0)) throw ConfigError("output_interval must be positive");
    if (!(scheme.cfl_factor > 0.0 && scheme.cfl_factor <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
    if (!(safety > 0.0 && safety <= 1.0)) throw ConfigError("safety must lie in (0, 1]");
    if (!(bump_threshold > 0.0 && bump_threshold < 1.0)) throw ConfigError("bump_threshold must lie in (0, 1)");
    if (stop_count < 0) throw ConfigError("stop_count must be nonnegative");
    if (stop_threshold < 0.0) throw ConfigError("stop_threshold must be nonnegative");
    if (snapshot_interval < 0.0) throw ConfigError("snapshot_interval must be nonnegative");
    if (!(rho_mean > 0.0)) throw ConfigError("rho_mean must be positive");
    if (!(mass > 0.0 && mass_left > 0.0 && mass_right > 0.0)) throw ConfigError("masses must be positive");
    if (initial == InitialKind::TwoBumps && !(bump_length > 0.0 && 2.0 * bump_length <= length))
        throw ConfigError("two-bumps needs 0 < 2 bump_length <= length");
}

std::vector<std::string> preset_names() { return {"unit-box", "wide-box", "two-bumps", "metastable"}; }

ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig c;
    c.preset = name;
    if (name == "unit-box") {
        c.params = ModelParams{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1};
        c.length = 1.0;
        c.cells = 100;
        c.rho_mean = 1.0;
        c.t_end = 300.0;
    } else if (name == "wide-box" || name == "metastable") {
        c.params = ModelParams{1.0, name == "metastable" ? 3.0 : 2.0, 10.0, 1.0, 0.1, 20.0, 10.0, 1};
        c.length = 3.0;
        c.cells = 300;
        c.rho_mean = 1.5;
        c.t_end = name == "metastable" ? 400.0 : 300.0;
    } else if (name == "two-bumps") {
        c.params = ModelParams{1.0, 2.0, 50.0, 1.0, 1.0, 1.0, 1.0, 1};
        c.length = 4.0;
        c.cells = 400;
        c.initial = InitialKind::TwoBumps;
        c.mass_left = 1.0;
        c.mass_right = 3.0;
        c.bump_length = 1.0;
        c.t_end = 150.0;
        c.stop_count = 0;
    } else if (name != "custom") {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "dx") {
        set_dx(cfg, value);
        return;
    }
    if (key == "preset") throw ConfigError("'preset' must be given before other keys");
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(cfg, key, value);
}

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    struct Entry {
        std::string key, value;
        int line;
    };
    std::vector<Entry> entries;
    std::optional<std::string> preset_name;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(where + "empty key");
        if (value.empty()) throw ConfigError(where + "empty value for key '" + key + "'");
        const bool seen = std::any_of(entries.begin(), entries.end(), [&](const Entry& e) { return e.key == key; });
        if (seen || (key == "preset" && preset_name)) throw ConfigError(where + "duplicate key '" + key + "'");
        if (key == "preset")
            preset_name = value;
        else
            entries.push_back({key, value, line_no});
    }

    ExperimentConfig cfg;
    try {
        cfg = preset(preset_name.value_or("custom"));
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    std::stable_partition(entries.begin(), entries.end(), [](const Entry& e) { return e.key != "dx"; });
    for (const Entry& e : entries) {
        try {
            apply_setting(cfg, e.key, e.value);
        } catch (const ConfigError& err) {
            throw ConfigError(source + ":" + std::to_string(e.line) + ": " + err.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c)
{
    const char* exec = c.execution == Execution::Serial ? "serial" : "parallel";
    return {
        {"preset", c.preset},
        {"model", to_string(c.model)},
        {"kappa", fmt(c.params.kappa)},
        {"gamma", fmt(c.params.gamma)},
        {"chi", fmt(c.params.chi)},
        {"alpha", fmt(c.params.alpha)},
        {"D", fmt(c.params.D)},
        {"a", fmt(c.params.a)},
        {"b", fmt(c.params.b)},
        {"delta", std::to_string(c.params.delta)},
        {"length", fmt(c.length)},
        {"cells", std::to_string(c.cells)},
        {"flux", to_string(c.scheme.flux.type)},
        {"suliciu_alpha", fmt(c.scheme.flux.suliciu_alpha)},
        {"reconstruction", to_string(c.scheme.reconstruction)},
        {"damping", to_string(c.scheme.damping)},
        {"cfl", fmt(c.scheme.cfl_factor)},
        {"dt_max", fmt(c.scheme.dt_max)},
        {"beta", fmt(c.beta)},
        {"safety", fmt(c.safety)},
        {"initial", to_string(c.initial)},
        {"rho_mean", fmt(c.rho_mean)},
        {"mass", fmt(c.mass)},
        {"mass_left", fmt(c.mass_left)},
        {"mass_right", fmt(c.mass_right)},
        {"bump_length", fmt(c.bump_length)},
        {"t_end", fmt(c.t_end)},
        {"output_interval", fmt(c.output_interval)},
        {"stop_threshold", fmt(c.stop_threshold)},
        {"stop_count", std::to_string(c.stop_count)},
        {"bump_threshold", fmt(c.bump_threshold)},
        {"snapshot_interval", fmt(c.snapshot_interval)},
        {"execution", exec},
    };
}

std::string format_config(const ExperimentConfig& cfg)
{
    std::ostringstream out;
    for (const auto& [k, v] : config_entries(cfg)) out << k << " = " << v << '\n';
    return out.str();
}

}  // namespace chemotaxis

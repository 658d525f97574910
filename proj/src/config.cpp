#include "config.hpp"

#include "divfree_localize.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nslab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const double num = to_double(s.substr(0, slash)), den = to_double(s.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("'" + s + "' has a zero denominator");
        return num / den;
    }
    double v = 0.0;
    const auto t = trim(s);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
        throw std::invalid_argument("'" + s + "' is not a number");
    return v;
}

long long to_int(const std::string& s) {
    long long v = 0;
    const auto t = trim(s);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
        throw std::invalid_argument("'" + s + "' is not an integer");
    return v;
}

std::uint64_t to_u64(const std::string& s) {
    std::uint64_t v = 0;
    const auto t = trim(s);
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
        throw std::invalid_argument("'" + s + "' is not an unsigned 64-bit integer");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw std::invalid_argument("'" + s + "' is not a boolean");
}

Vec3 to_vec3(const std::string& s) {
    const auto p = split(s, ',');
    if (p.size() != 3) throw std::invalid_argument("'" + s + "' is not a 3-vector a,b,c");
    return {to_double(p[0]), to_double(p[1]), to_double(p[2])};
}

std::vector<double> to_doubles(const std::string& s) {
    std::vector<double> v;
    if (trim(s).empty()) return v;
    for (const auto& p : split(s, ',')) v.push_back(to_double(p));
    return v;
}

std::vector<int> to_ints(const std::string& s) {
    std::vector<int> v;
    for (const auto& p : split(s, ',')) v.push_back(int(to_int(p)));
    return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m{
        {"experiment", [](ExperimentConfig& c, const std::string& v) { c.experiment = v; }},
        {"T", [](ExperimentConfig& c, const std::string& v) { c.data.T = to_double(v); }},
        {"threads", [](ExperimentConfig& c, const std::string& v) { c.threads = int(to_int(v)); }},
        {"output.dir", [](ExperimentConfig& c, const std::string& v) { c.out_dir = v; }},
        {"grid.L", [](ExperimentConfig& c, const std::string& v) { c.grid.L = to_double(v); }},
        {"grid.N", [](ExperimentConfig& c, const std::string& v) { c.grid.N = int(to_int(v)); }},
        {"grid.dealias", [](ExperimentConfig& c, const std::string& v) { c.grid.dealias = to_double(v); }},
        {"data.kind", [](ExperimentConfig& c, const std::string& v) { c.data.kind = v; }},
        {"data.seed", [](ExperimentConfig& c, const std::string& v) { c.data.seed = to_u64(v); }},
        {"data.amplitude", [](ExperimentConfig& c, const std::string& v) { c.data.amplitude = to_double(v); }},
        {"data.slope", [](ExperimentConfig& c, const std::string& v) { c.data.slope = to_double(v); }},
        {"data.kmin", [](ExperimentConfig& c, const std::string& v) { c.data.kmin = int(to_int(v)); }},
        {"data.kmax", [](ExperimentConfig& c, const std::string& v) { c.data.kmax = int(to_int(v)); }},
        {"data.mean", [](ExperimentConfig& c, const std::string& v) { c.data.mean = to_vec3(v); }},
        {"data.forcing", [](ExperimentConfig& c, const std::string& v) { c.data.forcing = to_double(v); }},
        {"data.packet.n", [](ExperimentConfig& c, const std::string& v) { c.data.packet_n = int(to_int(v)); }},
        {"data.packet.radius", [](ExperimentConfig& c, const std::string& v) { c.data.packet_radius = to_double(v); }},
        {"data.packet.amplitude",
         [](ExperimentConfig& c, const std::string& v) { c.data.packet_amplitude = to_double(v); }},
        {"data.packet.centre", [](ExperimentConfig& c, const std::string& v) { c.data.packet_centre = to_vec3(v); }},
        {"solver.dt", [](ExperimentConfig& c, const std::string& v) { c.solver.dt = to_double(v); }},
        {"solver.eps", [](ExperimentConfig& c, const std::string& v) { c.solver.eps = to_double(v); }},
        {"solver.stride", [](ExperimentConfig& c, const std::string& v) { c.solver.sample_stride = int(to_int(v)); }},
        {"solver.max_picard", [](ExperimentConfig& c, const std::string& v) { c.solver.max_picard = int(to_int(v)); }},
        {"solver.picard_tol", [](ExperimentConfig& c, const std::string& v) { c.solver.picard_tol = to_double(v); }},
        {"solver.c", [](ExperimentConfig& c, const std::string& v) { c.solver.c_small = to_double(v); }},
        {"solver.picard", [](ExperimentConfig& c, const std::string& v) { c.picard = to_bool(v); }},
        {"harness.delta", [](ExperimentConfig& c, const std::string& v) { c.harness.delta = to_double(v); }},
        {"harness.c", [](ExperimentConfig& c, const std::string& v) { c.harness.c = to_double(v); }},
        {"harness.C", [](ExperimentConfig& c, const std::string& v) { c.harness.C = to_double(v); }},
        {"harness.R", [](ExperimentConfig& c, const std::string& v) { c.harness.R = to_double(v); }},
        {"harness.r", [](ExperimentConfig& c, const std::string& v) { c.harness.r = to_double(v); }},
        {"harness.x0", [](ExperimentConfig& c, const std::string& v) { c.harness.x0 = to_vec3(v); }},
        {"harness.exterior", [](ExperimentConfig& c, const std::string& v) { c.harness.exterior = to_bool(v); }},
        {"harness.eps", [](ExperimentConfig& c, const std::string& v) { c.harness.eps = to_doubles(v); }},
        {"harness.ensemble", [](ExperimentConfig& c, const std::string& v) { c.harness.ensemble = int(to_int(v)); }},
        {"harness.residual_tol",
         [](ExperimentConfig& c, const std::string& v) { c.harness.residual_tol = to_double(v); }},
        {"harness.budget_tol", [](ExperimentConfig& c, const std::string& v) { c.harness.budget_tol = to_double(v); }},
        {"localize.field", [](ExperimentConfig& c, const std::string& v) { c.localize.field = v; }},
        {"localize.lmax", [](ExperimentConfig& c, const std::string& v) { c.localize.lmax = int(to_int(v)); }},
        {"localize.nrad", [](ExperimentConfig& c, const std::string& v) { c.localize.nrad = int(to_int(v)); }},
        {"localize.R1", [](ExperimentConfig& c, const std::string& v) { c.localize.R1 = to_double(v); }},
        {"localize.R2", [](ExperimentConfig& c, const std::string& v) { c.localize.R2 = to_double(v); }},
        {"localize.R3", [](ExperimentConfig& c, const std::string& v) { c.localize.R3 = to_double(v); }},
        {"localize.R4", [](ExperimentConfig& c, const std::string& v) { c.localize.R4 = to_double(v); }},
        {"localize.points", [](ExperimentConfig& c, const std::string& v) { c.localize.points = int(to_int(v)); }},
        {"counterexample.n", [](ExperimentConfig& c, const std::string& v) { c.counterexample.n = to_ints(v); }},
        {"counterexample.packet_L",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.packet_L = to_double(v); }},
        {"counterexample.packet_N",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.packet_N = int(to_int(v)); }},
        {"counterexample.box_L", [](ExperimentConfig& c, const std::string& v) { c.counterexample.box_L = to_double(v); }},
        {"counterexample.box_N",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.box_N = int(to_int(v)); }},
        {"counterexample.psi_radius",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.psi_radius = to_double(v); }},
        {"counterexample.component",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.component = int(to_int(v)); }},
        {"counterexample.distance",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.distance = to_double(v); }},
        {"counterexample.box_check",
         [](ExperimentConfig& c, const std::string& v) { c.counterexample.box_check = to_bool(v); }},
        {"homogenize.alpha", [](ExperimentConfig& c, const std::string& v) { c.homogenize.alpha = to_vec3(v); }},
        {"homogenize.lambda", [](ExperimentConfig& c, const std::string& v) { c.homogenize.lambda = to_doubles(v); }},
        {"homogenize.control", [](ExperimentConfig& c, const std::string& v) { c.homogenize.control = to_bool(v); }},
        {"symmetry.lambda", [](ExperimentConfig& c, const std::string& v) { c.symmetry.lambda = to_double(v); }},
    };
    return m;
}

bool needs_data(const std::string& e) {
    return e == "solve" || e == "energy-budget" || e == "total-speed" || e == "enstrophy-loc" ||
           e == "symmetry-suite";
}

void validate(const ExperimentConfig& c) {
    const auto line_of = [&](const std::string& key) {
        for (const auto& e : c.entries)
            if (e.key == key) return e.line > 0 ? "line " + std::to_string(e.line) + ": " : std::string("override: ");
        return std::string("default: ");
    };
    const auto fail = [&](const std::string& key, const std::string& msg) {
        throw ConfigError(line_of(key) + key + ": " + msg);
    };
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end())
        fail("experiment", "unknown experiment '" + c.experiment + "'");
    if (!(c.grid.L > 0)) fail("grid.L", "must be positive");
    if (c.grid.N < 4 || c.grid.N % 2 != 0) fail("grid.N", "must be an even integer >= 4");
    if (!(c.grid.dealias > 0 && c.grid.dealias <= 1)) fail("grid.dealias", "must lie in (0, 1]");
    if (c.threads < 1) fail("threads", "must be >= 1");
    if (c.out_dir.empty()) fail("output.dir", "must not be empty");
    if (!(c.data.T > 0)) fail("T", "must be positive");
    if (needs_data(c.experiment)) {
        const bool given = std::any_of(c.entries.begin(), c.entries.end(), [](const ConfigEntry& e) { return e.key == "data.kind"; });
        if (!given) throw ConfigError("missing key data.kind (required by experiment '" + c.experiment + "')");
        const auto& kinds = data_kinds();
        if (std::find(kinds.begin(), kinds.end(), c.data.kind) == kinds.end())
            fail("data.kind", "unknown generator '" + c.data.kind + "'");
        if (c.data.kmin < 1 || c.data.kmax < c.data.kmin) fail("data.kmax", "need 1 <= data.kmin <= data.kmax");
        if (double(c.data.kmax) > c.grid.dealias * c.grid.N / 2) fail("data.kmax", "exceeds the dealiased range");
        if (c.data.forcing < 0) fail("data.forcing", "must be >= 0");
        if (c.data.packet_n < 1 || 4 * c.data.packet_n > c.grid.N) fail("data.packet.n", "needs 1 <= n <= N/4");
        if (!(c.data.packet_radius > 0 && c.data.packet_radius <= c.grid.L / 4))
            fail("data.packet.radius", "must lie in (0, L/4]");
    }
    if (!(c.solver.dt > 0)) fail("solver.dt", "must be positive");
    if (c.solver.dt > c.data.T) fail("solver.dt", "exceeds the horizon T");
    if (c.solver.eps < 0) fail("solver.eps", "must be >= 0");
    if (c.solver.sample_stride < 1) fail("solver.stride", "must be >= 1");
    if (c.solver.max_picard < 1) fail("solver.max_picard", "must be >= 1");
    if (!(c.solver.picard_tol > 0)) fail("solver.picard_tol", "must be positive");
    if (!(c.solver.c_small > 0)) fail("solver.c", "must be positive");
    const auto& h = c.harness;
    if (!(h.delta > 0)) fail("harness.delta", "must be positive");
    if (!(h.c > 0)) fail("harness.c", "must be positive");
    if (!(h.C > 0)) fail("harness.C", "must be positive");
    if (h.R < 0) fail("harness.R", "must be >= 0");
    if (!(h.r > 0)) fail("harness.r", "must be positive");
    if (c.experiment == "enstrophy-loc" && !(h.R > h.r)) fail("harness.R", "must exceed harness.r");
    if (c.experiment == "energy-budget" && h.R > 0 && !(h.r < h.R / 2)) fail("harness.r", "must be below harness.R / 2");
    for (double e : h.eps)
        if (!(e > 0)) fail("harness.eps", "entries must be positive");
    if (h.ensemble < 1) fail("harness.ensemble", "must be >= 1");
    if (h.residual_tol < 0) fail("harness.residual_tol", "must be non-negative");
    if (!(h.budget_tol > 0)) fail("harness.budget_tol", "must be positive");
    const auto& l = c.localize;
    if (c.experiment == "localize") {
        const auto& f = suite_field_names();
        if (l.field != "all" && std::find(f.begin(), f.end(), l.field) == f.end())
            fail("localize.field", "unknown suite field '" + l.field + "'");
        if (!(0 < l.R1 && l.R1 < l.R2 && 2 * l.R2 <= l.R3 && l.R3 < l.R4))
            fail("localize.R3", "need 0 < R1 < R2, 2 R2 <= R3 < R4");
        if (l.lmax < 4) fail("localize.lmax", "must be >= 4");
        if (l.nrad < 8) fail("localize.nrad", "must be >= 8");
        if (l.points < 1) fail("localize.points", "must be >= 1");
    }
    const auto& ce = c.counterexample;
    if (c.experiment == "counterexample") {
        if (ce.n.empty()) fail("counterexample.n", "must list at least one frequency");
        for (int n : ce.n)
            if (n < 1) fail("counterexample.n", "frequencies must be positive");
        if (!(ce.packet_L > 0) || ce.packet_N < 4 || ce.packet_N % 2) fail("counterexample.packet_N", "bad packet grid");
        if (!(ce.box_L > 0) || ce.box_N < 4 || ce.box_N % 2) fail("counterexample.box_N", "bad kernel box");
        if (!(ce.psi_radius > 0)) fail("counterexample.psi_radius", "must be positive");
        if (ce.component < 0 || ce.component > 2) fail("counterexample.component", "must be 0, 1 or 2");
        if (!(ce.distance > 1)) fail("counterexample.distance", "must exceed the packet radius 1");
    }
    if (c.experiment == "homogenize") {
        if (c.homogenize.lambda.size() < 2) fail("homogenize.lambda", "needs at least two values");
        for (double v : c.homogenize.lambda)
            if (v < 0) fail("homogenize.lambda", "values must be >= 0");
    }
    if (!(c.symmetry.lambda > 0)) fail("symmetry.lambda", "must be positive");
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> n{"solve",    "energy-budget", "total-speed", "enstrophy-loc",
                                            "localize", "counterexample", "homogenize", "symmetry-suite"};
    return n;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> k = [] {
        std::vector<std::string> out;
        for (const auto& [key, _] : setters()) out.push_back(key);
        return out;
    }();
    return k;
}

std::vector<ConfigEntry> read_entries(const std::string& text) {
    std::vector<ConfigEntry> out;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const auto body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        ConfigEntry e{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
        if (e.key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
        if (!setters().count(e.key)) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + e.key + "'");
        if (auto it = seen.find(e.key); it != seen.end())
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + e.key + "' (first set on line " +
                              std::to_string(it->second) + ")");
        seen[e.key] = line;
        out.push_back(e);
    }
    return out;
}

ExperimentConfig build_config(const std::vector<ConfigEntry>& entries) {
    ExperimentConfig c;
    c.entries = entries;
    for (const auto& e : entries) {
        const auto it = setters().find(e.key);
        const std::string where = e.line > 0 ? "line " + std::to_string(e.line) : std::string("override");
        if (it == setters().end()) throw ConfigError(where + ": unknown key '" + e.key + "'");
        try {
            it->second(c, e.value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(where + ": " + e.key + ": " + ex.what());
        }
    }
    if (std::none_of(entries.begin(), entries.end(), [](const ConfigEntry& e) { return e.key == "experiment"; }))
        throw ConfigError("missing key experiment");
    validate(c);
    return c;
}

ExperimentConfig parse_config_text(const std::string& text) { return build_config(read_entries(text)); }

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config_text(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    auto entries = cfg.entries;
    bool replaced = false;
    for (auto& e : entries)
        if (e.key == key) {
            e.value = value;
            e.line = 0;
            replaced = true;
        }
    if (!replaced) entries.push_back(ConfigEntry{key, value, 0});
    return build_config(entries);
}

}  // namespace nslab

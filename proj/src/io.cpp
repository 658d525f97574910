#include "io.hpp"

#include "format_util.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef NSLAB_VERSION
#define NSLAB_VERSION "0.0.0"
#endif
#ifndef NSLAB_DEFAULT_BASELINE_DIR
#define NSLAB_DEFAULT_BASELINE_DIR "baselines"
#endif

namespace nslab {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace

bool RunManifest::passed() const {
    if (!error.empty()) return false;
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

const char* code_version() { return NSLAB_VERSION; }

std::string csv_cell(double v) { return fmt_double(v); }

void write_csv(const std::string& path, const Row& header, const std::vector<Row>& rows) {
    auto out = open_out(path);
    const auto line = [&](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw std::invalid_argument("CSV row width differs from the header");
        line(r);
    }
}

void write_csv(const std::string& path, const Row& header, const std::vector<std::vector<double>>& rows) {
    std::vector<Row> text;
    for (const auto& r : rows) {
        Row t;
        for (double v : r) t.push_back(csv_cell(v));
        text.push_back(t);
    }
    write_csv(path, header, text);
}

void write_field(const std::string& path, const VectorField& u) {
    auto out = open_out(path, true);
    const auto& g = u.grid();
    out << "nslab-field " << g.N << ' ' << fmt_double(g.L) << " 3\n";
    for (const auto& c : u.to_physical()) out.write(reinterpret_cast<const char*>(c.data()), std::streamsize(c.size() * sizeof(double)));
}

VectorField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::string header;
    std::getline(in, header);
    std::istringstream hs(header);
    std::string magic;
    SpectralGrid g;
    int ncomp = 0;
    hs >> magic >> g.N >> g.L >> ncomp;
    if (magic != "nslab-field" || ncomp != 3 || !hs) throw std::runtime_error("'" + path + "' is not a field dump");
    g.validate();
    std::array<std::vector<double>, 3> s;
    for (auto& c : s) {
        c.resize(g.physical_size());
        in.read(reinterpret_cast<char*>(c.data()), std::streamsize(c.size() * sizeof(double)));
    }
    if (!in) throw std::runtime_error("'" + path + "' is truncated");
    return VectorField::from_physical(g, s);
}

std::string format_verdict(const Verdict& v) {
    std::string s = std::string(v.pass ? "PASS " : "FAIL ") + v.label + " value=" + fmt_double(v.value) +
                    " bound=" + fmt_double(v.bound);
    if (!v.detail.empty()) s += " " + v.detail;
    return s;
}

void write_verdicts(const std::string& path, const std::vector<Verdict>& v) {
    auto out = open_out(path);
    for (const auto& x : v) out << format_verdict(x) << '\n';
}

void write_manifest(const std::string& path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["experiment"] = m.experiment;
    j["version"] = m.version;
    auto& cfg = j["config"] = nlohmann::ordered_json::array();
    for (const auto& e : m.config) cfg.push_back({{"key", e.key}, {"value", e.value}, {"line", e.line}});
    j["wall_seconds"] = m.wall_seconds;
    auto& files = j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : m.files) files.push_back({{"path", f.path}, {"bytes", f.bytes}});
    auto& ver = j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& v : m.verdicts)
        ver.push_back({{"label", v.label}, {"pass", v.pass}, {"value", v.value}, {"bound", v.bound}, {"detail", v.detail}});
    j["error"] = m.error;
    j["exit_code"] = m.exit_code;
    j["passed"] = m.passed();
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

void write_growth(const std::string& csv_path, const std::string& dat_path, const GrowthStudy& g) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : g.rows) rows.push_back({double(r.n), r.x0, r.h1, r.h2, r.remainder});
    write_csv(csv_path, {"n", "x0", "h1", "h2", "remainder"}, rows);
    auto out = open_out(dat_path);
    out << "# n x0 h1 h2 remainder\n# slope " << fmt_double(g.slope) << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << fmt_double(r[i]);
        out << '\n';
    }
}

std::string Baselines::default_dir() {
    if (const char* env = std::getenv("NSLAB_BASELINE_DIR"); env && *env) return env;
    return NSLAB_DEFAULT_BASELINE_DIR;
}

Baselines Baselines::load(const std::string& dir) {
    Baselines b;
    b.source_ = dir + "/baselines.txt";
    std::ifstream in(b.source_);
    if (!in) throw ConfigError("cannot read baselines from '" + b.source_ + "' (set NSLAB_BASELINE_DIR)");
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::istringstream ls(hash == std::string::npos ? raw : raw.substr(0, hash));
        std::string key, eq;
        double v = 0.0;
        if (!(ls >> key)) continue;
        if (!(ls >> eq >> v) || eq != "=")
            throw ConfigError(b.source_ + ":" + std::to_string(line) + ": expected key = number");
        b.values_[key] = v;
    }
    return b;
}

double Baselines::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("baseline '" + key + "' missing from " + source_);
    return it->second;
}

}  // namespace nslab

// Persistence: CSV tables, field dumps, verdicts, manifests and baselines.
#pragma once

#include "config.hpp"
#include "counterexample.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nslab {

struct Verdict {
    std::string label;  // equation label or property name
    bool pass = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct Artifact {
    std::string path;  // relative to the output directory
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::vector<ConfigEntry> config;
    std::string experiment;
    std::string version;
    double wall_seconds = 0.0;
    std::vector<Artifact> files;
    std::vector<Verdict> verdicts;
    std::string error;  // set when the run aborted
    int exit_code = 0;

    bool passed() const;
};

const char* code_version();

using Row = std::vector<std::string>;

std::string csv_cell(double v);
void write_csv(const std::string& path, const Row& header, const std::vector<Row>& rows);
void write_csv(const std::string& path, const Row& header, const std::vector<std::vector<double>>& rows);

// "nslab-field <N> <L> 3\n" followed by three x1-fastest float64 blocks.
void write_field(const std::string& path, const VectorField& u);
VectorField read_field(const std::string& path);

// One line per verdict: PASS|FAIL <label> value=<v> bound=<b> [detail].
void write_verdicts(const std::string& path, const std::vector<Verdict>& v);
std::string format_verdict(const Verdict& v);

void write_manifest(const std::string& path, const RunManifest& m);

// growth.csv plus a whitespace-separated growth.dat for gnuplot.
void write_growth(const std::string& csv_path, const std::string& dat_path, const GrowthStudy& g);

// Frozen calibration constants read from <dir>/baselines.txt (key = value).
class Baselines {
public:
    static Baselines load(const std::string& dir);
    // NSLAB_BASELINE_DIR if set, else the source-tree default.
    static std::string default_dir();
    double get(const std::string& key) const;
    bool has(const std::string& key) const { return values_.count(key) > 0; }

private:
    std::string source_;
    std::map<std::string, double> values_;
};

}  // namespace nslab

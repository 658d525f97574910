// Flat key = value experiment configuration.
#pragma once

#include "data_gen.hpp"
#include "mild_solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HarnessParams {
    double delta = 1.0;
    double c = 1.0;
    double C = 1.0;
    double R = 0.0;  // 0 disables the local energy estimate
    double r = 0.25;
    Vec3 x0{};
    bool exterior = false;
    std::vector<double> eps;  // hyperdissipative reruns
    int ensemble = 1;
    double residual_tol = 0.0;  // 0: ten times the frozen shear dt^2 coefficient
    double budget_tol = 1e-4;
};

struct LocalizeParams {
    std::string field = "all";
    int lmax = 32;
    int nrad = 64;
    double R1 = 0.5, R2 = 1.0, R3 = 2.0, R4 = 2.5;
    int points = 200;
};

struct CounterexampleParams {
    std::vector<int> n{8, 16, 32};
    double packet_L = 4.0;
    int packet_N = 192;
    double box_L = 16.0;
    int box_N = 128;
    double psi_radius = 0.5;
    int component = 2;
    double distance = 3.0;
    bool box_check = true;
};

struct HomogenizeParams {
    Vec3 alpha{};  // zero selects (sqrt2, sqrt3, sqrt5) mod 1
    std::vector<double> lambda{1e2, 1e4};
    bool control = true;
};

struct SymmetryParams {
    double lambda = 2.0;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;  // 0 for command-line overrides
};

struct ExperimentConfig {
    std::string experiment;
    SpectralGrid grid;
    DataSpec data;
    SolverConfig solver;
    bool picard = false;
    HarnessParams harness;
    LocalizeParams localize;
    CounterexampleParams counterexample;
    HomogenizeParams homogenize;
    SymmetryParams symmetry;
    std::string out_dir = "out";
    int threads = 1;
    std::vector<ConfigEntry> entries;  // as read, in order
};

const std::vector<std::string>& experiment_names();
const std::vector<std::string>& config_keys();

// Splits text into entries; '#' starts a comment.  Duplicate keys, malformed
// lines and unknown keys raise ConfigError naming the line numbers.
std::vector<ConfigEntry> read_entries(const std::string& text);
// Typed configuration with every referenced parameter validated.
ExperimentConfig build_config(const std::vector<ConfigEntry>& entries);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);
// Replaces or appends a key, then rebuilds.
ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace nslab

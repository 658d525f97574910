// Diagnostics that evaluate the energy, total-speed and enstrophy estimates on
// solver trajectories.
#pragma once

#include "trajectory.hpp"

#include <string>
#include <vector>

namespace nslab {

// Smooth radial weight eta(x) = chi((|x - x0| - R) / r), 1 inside B(x0, R - r)
// and 0 outside B(x0, R).  The exterior flavour is 1 outside B(x0, R + r) and
// 0 inside B(x0, R).  Distances are periodic (minimum image).
struct StaticCutoff {
    Vec3 x0{};
    double R = 0.0;
    double r = 0.0;
    bool exterior = false;

    void validate() const;
    double eta(const SpectralGrid& g, const Vec3& x) const;
};

double periodic_distance(const SpectralGrid& g, const Vec3& x, const Vec3& x0);

// chi: 1 on (-inf, -1], 0 on [0, inf), smooth in between.
double cutoff_profile(double s);

// max over j = 0, 1, 2 of r^j sup |grad^j eta| on the grid.
double cutoff_derivative_constant(const StaticCutoff& c, const SpectralGrid& g);

struct EnergyReport {
    bool global = true;
    std::vector<double> times;
    std::vector<double> local_energy;  // E_{eta^4}(t), or 1/2 ||u||^2 globally
    std::vector<double> dissipation;   // int_0^t X_1
    std::vector<double> work;          // int_0^t <u, f> (global only)
    double identity_defect = 0.0;      // max_t |E(t) - E(0) + D(t) - W(t)| / scale (global only)
    double lhs = 0.0;
    double rhs = 0.0;
    // Right-hand side pieces: data, forcing, r^-1 term, r^-2 term (local only).
    std::vector<double> rhs_terms;
    double ratio = 0.0;
};

// Global budget when cutoff == nullptr.  Rejects forcing that is not divergence-free.
EnergyReport energy_budget(const Trajectory& traj, const StaticCutoff* cutoff = nullptr);

struct SpeedReport {
    double value = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
};

// int_0^T ||u||_inf dt against E^{1/2} T^{1/4} + E, with E the data energy.
SpeedReport total_speed(const Trajectory& traj, const DataTriple& data);

struct EnstrophyOptions {
    Vec3 x0{};
    double R = 1.0;
    double r = 0.25;
    double delta = 1.0;
    double c = 1.0;
    double C = 1.0;
};

struct EnstrophyReport {
    std::vector<double> times;
    std::vector<double> W;
    std::vector<double> radius;  // R'(t)
    double delta = 0.0;
    double eeta = 0.0;        // ||omega_0||_{L^2(B)} + ||curl f||_{L^1 L^2(B)}
    double smallness = 0.0;   // delta^4 T + delta^5 E^{1/2} T
    double r_required = 0.0;  // C (E + E^{1/2} T^{1/4} + delta^-2)
    double inner_norm = 0.0;  // ||omega||_{L^inf L^2(B(R-r))} + ||grad omega||_{L^2 L^2(B(R-r))}
    double w_ratio = 0.0;     // max W / delta^2
    double tax_violation = 0.0;
    std::vector<std::string> violations;  // failed hypotheses by label
};

EnstrophyReport enstrophy_localisation(const Trajectory& traj, const DataTriple& data, const EnstrophyOptions& o);

// L^2 defect of the vorticity equation at each sample time.
std::vector<double> vorticity_residual(const Trajectory& traj);

}  // namespace nslab

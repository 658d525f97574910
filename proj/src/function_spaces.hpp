// Sobolev, mixed space-time and energy-class norms.
#pragma once

#include "trajectory.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nslab {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (L^3 sum_k (1 + |k/L|^2)^s |fhat(k)|^2)^(1/2); the homogeneous variant uses
// |k/L|^(2s) and requires a vanishing mean.  s = 0 is the L^2 quadrature norm.
double sobolev_norm(const ScalarField& f, double s, bool homogeneous = false);
double sobolev_norm(const VectorField& u, double s, bool homogeneous = false);
inline double l2_norm(const VectorField& u) { return sobolev_norm(u, 0.0); }
inline double l2_norm(const ScalarField& f) { return sobolev_norm(f, 0.0); }

// L^p in time of sampled values by composite trapezoid; p = inf takes the max.
double mixed_norm(const std::vector<double>& times, const std::vector<double>& values, double p);
double mixed_norm(const Trajectory& traj, double p, double s);
double xs_norm(const Trajectory& traj, double s);
double forcing_mixed_norm(const ForcingSeries& f, const SpectralGrid& g, double T, double p, double s);

double energy_functional(const VectorField& u0, const ForcingSeries& f, double T);
double enstrophy(const VectorField& u);
double h1_data_norm(const VectorField& u0, const ForcingSeries& f, double T);

struct NormReport {
    std::string name;
    double value = 0.0;
    std::vector<double> times;
    std::vector<double> per_time;
};

std::string csv_header(const NormReport& r);
std::string csv_row(const NormReport& r);

}  // namespace nslab

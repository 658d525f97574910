// Exact symmetries of the forced Navier-Stokes system, mean-zero normalisation
// and the shifted-forcing homogenisation construction.
#pragma once

#include "trajectory.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace nslab {

// Velocity path v(t) with derivative v'(t), sampled on increasing times.  The
// displacement int_0^t v is taken by trapezoid on the sample grid.
struct VelocityPath {
    std::vector<double> times;
    std::vector<Vec3> v;
    std::vector<Vec3> dv;

    Vec3 velocity(double t) const;
    Vec3 acceleration(double t) const;
    Vec3 displacement(double t) const;

    static VelocityPath sample(const std::vector<double>& times, const std::function<Vec3(double)>& v,
                               const std::function<Vec3(double)>& dv);
};

struct SpaceTranslate {
    Vec3 x0{};
};
struct TimeTranslate {
    double t0 = 0.0;
};
struct Scale {
    double lambda = 1.0;
};
struct PressureShift {
    std::function<double(double)> C;
};
// u(t, x - int v) + v(t), pressure p(t, x - int v) - x . v'(t).
struct Galilean {
    VelocityPath path;
};
// Pressure p + q, forcing f + grad q.  `times` gives the sample grid used
// when the transform is applied to data rather than a trajectory.
struct ForcingShift {
    std::function<ScalarField(double)> q;
    std::vector<double> times;
};
// u(t, x - int v) + v(t), pressure p(t, x - int v), forcing f(t, x - int v) + v'(t).
struct GalileanForced {
    VelocityPath path;
};

using SymmetryTransform =
    std::variant<SpaceTranslate, TimeTranslate, Scale, PressureShift, Galilean, ForcingShift, GalileanForced>;

const char* transform_name(const SymmetryTransform& s);

Trajectory apply(const SymmetryTransform& s, const Trajectory& traj);
DataTriple apply(const SymmetryTransform& s, const DataTriple& data);

struct MeanZeroResult {
    DataTriple data;
    VelocityPath path;
};

// Removes the means of u0 and f through the forced Galilean transform with
// v(0) = -mean(u0), v'(t) = -mean(f(t)).
MeanZeroResult normalise_mean_zero(const DataTriple& data, int min_samples = 101);

// f(t, x - w t^2) sampled at the given times.
ForcingSeries homogenise_shift(const ForcingSeries& f, const SpectralGrid& g, const Vec3& w,
                               const std::vector<double>& times);

// Separable test function phi(t, x) = envelope(t) * shape(x).
struct TestFunction {
    VectorField shape;
    std::function<double(double)> envelope;
};

struct PairingTable {
    std::vector<double> lambda;
    std::vector<double> magnitude;
    double min_phase_gap = 0.0;  // min over active modes of dist(k . alpha, Z)
};

// |int_0^T int f(t, x - lambda alpha t^2) . phi(t, x) dx dt| for each lambda,
// evaluated mode by mode with a phase-resolving Simpson rule.
PairingTable weak_pairing_decay(const ForcingSeries& f, const SpectralGrid& g, const TestFunction& phi,
                                const Vec3& alpha, const std::vector<double>& lambdas, double T,
                                bool enforce_irrational = true);

}  // namespace nslab

// Mild solutions of the (hyperdissipative) Navier-Stokes system on the torus.
#pragma once

#include "trajectory.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

struct SolverConfig {
    double dt = 1e-3;
    double eps = 0.0;          // hyperdissipation coefficient (eps * Delta^2)
    int sample_stride = 1;     // store every k-th step
    int max_picard = 100;
    double picard_tol = 1e-10; // X^1 distance between iterates
    double c_small = 1e-2;     // smallness constant for local well-posedness
    double blowup = 1e6;       // H^1 threshold for continuation
    int max_windows = 100000;
};

// Raised when the solution stops being finite or an iteration diverges.
class NumericalAbort : public std::runtime_error {
public:
    NumericalAbort(const std::string& what, long step, double time)
        : std::runtime_error(what), step_(step), time_(time) {}
    long step() const { return step_; }
    double time() const { return time_; }

private:
    long step_;
    double time_;
};

// B(u, v)_i = -1/2 d_j (u_i v_j + u_j v_i), products dealiased.
VectorField bilinear(const VectorField& u, const VectorField& v);
// d_j(u_i u_j), the advection term in conservative form.
VectorField advection(const VectorField& u);
// p = -Delta^-1 d_i d_j (u_i u_j) + Delta^-1 div f.
ScalarField pressure(const VectorField& u, const VectorField& f);

double divergence_l2(const VectorField& u);

Trajectory evolve(const DataTriple& data, const SolverConfig& cfg);

struct PicardResult {
    Trajectory traj;
    int iterations = 0;
    double contraction = 0.0;
    double smallness = 0.0;  // (||u0||_H1 + ||f||_{L1 H1})^4 T
    std::vector<double> distances;
};

PicardResult picard_solve(const DataTriple& data, const SolverConfig& cfg);

struct BlowupVerdict {
    bool completed = false;
    double T_star = 0.0;
    double final_h1 = 0.0;
    std::vector<double> window_start;
    std::vector<double> window_h1;
};

BlowupVerdict continue_max(const DataTriple& data, const SolverConfig& cfg);

// Three-point second-order d/dt stencil at sample i on a nonuniform grid
// (one-sided at the ends).  Needs at least three samples.
struct TimeStencil {
    std::size_t idx[3];
    double w[3];
};
TimeStencil time_stencil(const std::vector<double>& t, std::size_t i);

// L^2 norm of du/dt + (u.grad)u - Delta u + eps Delta^2 u + grad p - f at each
// sample, with second-order finite differences in time.
std::vector<double> residual(const Trajectory& traj);

}  // namespace nslab

// Dyadic Littlewood-Paley projections on the torus.  Frequencies are measured
// as |xi| = |k| / L.
#pragma once

#include "spectral_core.hpp"

#include <vector>

namespace nslab {

// Smooth bump: 1 on [0, 1], 0 on [2, inf), C-infinity glue in between.
double lp_phi(double xi);
// Annular piece phi(xi) - phi(2 xi), supported in [1/2, 2].
double lp_psi(double xi);

enum class LPKind { At, AtMost, Above };

// At: P_N; AtMost: sum_{M <= N} P_M (mean excluded); Above: 1 - phi(|xi|/N).
ScalarField lp_project(const ScalarField& f, double N, LPKind kind);
VectorField lp_project(const VectorField& u, double N, LPKind kind);

// Dyadic frequencies whose pieces sum (with the mean) to the identity.
std::vector<double> dyadic_range(const SpectralGrid& g);
// Dyadic frequencies resolved well enough for Bernstein checks: 2 <= N <= N_grid / (3 L).
std::vector<double> bernstein_range(const SpectralGrid& g);

double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& u, double p);

struct BernsteinRatios {
    double gradient = 0.0;  // ||grad P_N f||_p / (N ||P_N f||_p)
    double lebesgue = 0.0;  // ||P_N f||_q / (N^(3/p - 3/q) ||P_N f||_p)
};

BernsteinRatios bernstein_check(const ScalarField& f, double N, double p, double q);

// Dyadic frequencies M at which P_M(f g) exceeds tol relative to ||f g||_2.
std::vector<double> product_support(const ScalarField& f, const ScalarField& g, double tol = 1e-10);

}  // namespace nslab

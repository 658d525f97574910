// Divergence-free truncation of a field to a spherical shell around x0.
#pragma once

#include "spherical.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

using FieldFn = std::function<Vec3(const Vec3&)>;

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// eta = 1 on [R1, R2], 0 on [R3, R4], exp-glue step in between.
struct AnnulusSpec {
    Vec3 x0{};
    double R1 = 0.5, R2 = 1.0, R3 = 2.0, R4 = 2.5;

    void validate() const;
    double eta(double r) const;
    double eta_d(double r) const;
    double eta_dd(double r) const;
};

struct LocalizeOptions {
    int lmax = 32;
    int nrad = 64;
    double div_tol = 1e-8;
    double flux_tol = 1e-8;
    double tail_tol = 1e-6;
};

// Outward flux through the sphere |x - x0| = r.
double flux_through_sphere(const FieldFn& u, const Vec3& x0, double r, const SphereGrid& g);
// Same with the radius restricted to the open shell (R1, R4).
double flux_check(const FieldFn& u, const AnnulusSpec& spec, double r, int lmax = 32);

// Radial component and tangential split per Chebyshev node:
// u = sum a_lm Y rhat + S_lm grad Y + T_lm rhat x grad Y (unit-sphere gradient).
struct SphericalField {
    AnnulusSpec spec;
    Chebyshev radial;
    SphereGrid grid;
    LocalizeOptions options;
    int lmax = 0;
    std::vector<std::vector<double>> a, S, T;  // [node][lm]
    double scale = 0.0;                        // max |u| over the samples
    double tail = 0.0;                         // relative energy not captured up to lmax
    double max_flux = 0.0;  // |flux| / (scale r^2) over the nodes
    double max_div = 0.0;   // |S_lm - d_r(r^2 a_lm) / (r l(l+1))| / scale

    static SphericalField analyse(const FieldFn& u, const AnnulusSpec& spec, const LocalizeOptions& opt = {});
};

// Result of the truncation, with smooth radial profiles stored per (l, m) on
// the Chebyshev nodes: a = u_r part, D = d/dr (r^2 a), T = toroidal part.
struct LocalizedField {
    AnnulusSpec spec;
    Chebyshev radial;
    int lmax = 0;
    std::vector<std::vector<double>> a, D, T;  // [lm][node]
    double scale = 0.0;

    // Zero for |x - x0| >= R3. Radii down to 0.99 R1 extrapolate the radial
    // profiles; anything further inside throws.
    Vec3 evaluate(const Vec3& x) const;
};

LocalizedField localize_divfree(const SphericalField& u);
LocalizedField localize_divfree(const FieldFn& u, const AnnulusSpec& spec, const LocalizeOptions& opt = {});

// Sobolev norms over the shell R1 <= |x - x0| <= R4.
struct ShellNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;  // only for sampled inputs
};
ShellNorms localized_norms(const LocalizedField& u);

// Radial nodes and weights (including r^2) for integrals over the shell.
struct RadialRule {
    std::vector<double> r, w;
    // Clenshaw-Curtis on [R1, R4].
    static RadialRule shell(const AnnulusSpec& spec, int n);
    // Clenshaw-Curtis on [R1, R2] and on four panels of [R2, R3]; integrands
    // carrying eta are smooth on each piece and vanish beyond R3.
    static RadialRule cutoff(const AnnulusSpec& spec, int n);
};

// Fourth-order finite differences of the callable with step h.
ShellNorms field_norms(const FieldFn& u, const AnnulusSpec& spec, const RadialRule& rule, int lmax = 32,
                       double h = 1e-3);
ShellNorms field_norms(const FieldFn& u, const AnnulusSpec& spec, int lmax = 32, int nrad = 48, double h = 1e-3);

// Fourth-order central divergence of a callable.
double fd_divergence(const FieldFn& u, const Vec3& x, double h = 1e-3);

struct LocalizeCheck {
    double agreement = 0.0;   // max |u~ - u| / scale on R1 < r < R2
    double vanishing = 0.0;   // max |u~| / scale on R3 < r < R4
    double divergence = 0.0;  // max |div u~| / scale on the shell
};
// Random points drawn from a seeded generator, kept 2h away from the shell edges.
LocalizeCheck check_localized(const FieldFn& u, const LocalizedField& v, int npoints, std::uint64_t seed);

// Named divergence-free fields centred at the origin with no flux through spheres
// of radius < 6: constant, rotation, abc, curl-gaussian, potential.
const std::vector<std::string>& suite_field_names();
FieldFn suite_field(const std::string& name);

// Periodic trilinear sampling of a grid field (O(h^2) accurate).
FieldFn trilinear_sampler(const VectorField& u);
// Grid image of u~ with the inner ball filled from `inner`.
VectorField resample_localized(const LocalizedField& v, const SpectralGrid& g, const FieldFn& inner);

}  // namespace nslab

// Real spherical harmonics on a Gauss-Legendre x uniform-longitude grid, the
// toroidal/poloidal split of tangent fields, and Chebyshev tools on an interval.
#pragma once

#include "spectral_core.hpp"

#include <vector>

namespace nslab {

inline int sh_index(int l, int m) { return l * l + l + m; }
inline int sh_count(int lmax) { return (lmax + 1) * (lmax + 1); }

// Y_lm = P_lm(theta) * trig_m(phi), trig_m = cos(m phi) for m >= 0 and
// sin(|m| phi) for m < 0, orthonormal on the unit sphere.
struct SphereGrid {
    int lmax = 0;   // degree of the stored tables
    int nlat = 0;
    int nlon = 0;
    std::vector<double> theta, cos_t, sin_t, weight;
    std::vector<double> phi;
    std::vector<double> P, dP;  // [i * sh_count(lmax) + lm]

    // nlat defaults to 3 (lmax + 1) / 2 + 1, nlon = 2 nlat.
    static SphereGrid make(int lmax, int nlat = 0);
    std::size_t size() const { return std::size_t(nlat) * nlon; }
    Vec3 direction(int i, int k) const;
    Vec3 e_theta(int i, int k) const;
    Vec3 e_phi(int i, int k) const;
    double dphi() const;
};

// Y, dY/dtheta and (1/sin theta) dY/dphi at one direction, for l <= lmax.
void sh_basis(int lmax, double theta, double phi, std::vector<double>& Y, std::vector<double>& Yt,
              std::vector<double>& Yp);

// Scalar analysis of grid values (index i * nlon + k) up to degree l <= grid.lmax.
std::vector<double> sh_analyse(const SphereGrid& g, const std::vector<double>& f, int lmax);
std::vector<double> sh_synthesise(const SphereGrid& g, const std::vector<double>& c, int lmax);

// Tangent field (u_theta, u_phi) = sum_lm S_lm grad Y_lm + T_lm rhat x grad Y_lm.
void vsh_analyse(const SphereGrid& g, const std::vector<double>& ut, const std::vector<double>& up, int lmax,
                 std::vector<double>& S, std::vector<double>& T);
void vsh_synthesise(const SphereGrid& g, const std::vector<double>& S, const std::vector<double>& T, int lmax,
                    std::vector<double>& ut, std::vector<double>& up);

// Chebyshev-Gauss-Lobatto nodes on [a, b] (descending from b), their
// differentiation matrix (row-major), Clenshaw-Curtis weights and
// barycentric interpolation weights at a point.
struct Chebyshev {
    double a = 0.0, b = 1.0;
    std::vector<double> x;
    std::vector<double> D;
    std::vector<double> quad;

    static Chebyshev make(int n, double a, double b);
    int size() const { return int(x.size()); }
    std::vector<double> derivative(const std::vector<double>& f) const;
    std::vector<double> interpolation_weights(double r) const;
};

}  // namespace nslab

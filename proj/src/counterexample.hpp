// High-frequency wave packets whose pressure pairing grows linearly in the
// frequency while their H^1 norm shrinks.
#pragma once

#include "spectral_core.hpp"

#include <string>
#include <vector>

namespace nslab {

// u = n^{-5/2} curl(chi(x - x0) sin(n xi.(x - x0)) eta_dir), chi the exp-glue
// bump of radius chi_radius.
struct WavePacketSpec {
    int n = 8;
    Vec3 x0{3.0, 0.0, 0.0};
    Vec3 xi{2 * 3.14159265358979323846 * 12 / 32, 0.0, 0.0};
    Vec3 eta_dir{0.0, 1.0, 0.0};
    double chi_radius = 1.0;

    void validate() const;
    Vec3 polarisation() const;  // xi x eta_dir
};

double bump(double s);  // exp(-1 / (1 - s^2)) for |s| < 1, else 0

// Mass-one radial exp bump centred at the origin; `component` selects which
// entry of the vector pairing is reported.
struct RadialTestFunction {
    double radius = 0.5;
    int component = 2;

    double operator()(const Vec3& x) const;
    double normalisation() const;
};

// Packet grid: the packet centre sits at the middle of the box. The curl is
// taken spectrally, so the field is discretely divergence-free and vanishes
// outside the bump up to the truncation ringing of the sampled potential.
void check_packet_grid(const WavePacketSpec& spec, const SpectralGrid& g);
VectorField wave_packet(const WavePacketSpec& spec, const SpectralGrid& g);
// L^2 norm of u - n^{-3/2} cos(n xi.y) chi(y) (xi x eta_dir).
double leading_remainder(const WavePacketSpec& spec, const SpectralGrid& g, const VectorField& u);

// K_ij = d_i d_j d_c Delta^{-1} psi sampled on a periodic box centred on psi.
struct PairingKernel {
    SpectralGrid box;
    int component = 2;
    std::array<std::vector<double>, 6> K;  // (00, 01, 02, 11, 12, 22)

    static PairingKernel compute(const RadialTestFunction& psi, const SpectralGrid& box);
    // Six-point Lagrange interpolation at a physical point.
    double at(int i, int j, const Vec3& x) const;
    // K_ij w_i w_j
    double contract(const Vec3& w, const Vec3& x) const;
};

// Closed form of K outside the support of a mass-one radial psi:
// -d_i d_j d_c (1 / (4 pi |x|)).
double point_mass_kernel(int i, int j, int c, const Vec3& x);

// sum_x K_ij(x) Delta u_i Delta u_j h^3 with the packet grid centre placed at `centre`.
double x0_pairing(const VectorField& u, const Vec3& centre, const PairingKernel& k, double support_radius);
double x0_pairing(const VectorField& u, const Vec3& centre, const RadialTestFunction& psi, const SpectralGrid& box,
                  double support_radius);

// Coarse search over directions at |x0| = distance maximising |K_ij w_i w_j|.
Vec3 search_x0(const PairingKernel& k, const Vec3& w, double distance, int ntheta = 12, int nphi = 24);

struct GrowthRow {
    int n = 0;
    double x0 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double remainder = 0.0;
};

struct GrowthStudy {
    std::vector<GrowthRow> rows;
    double slope = 0.0;               // least-squares slope of log |X0| against log n
    std::vector<double> ratios;       // X0(n_{i+1}) / X0(n_i)
};

GrowthStudy growth_study(const WavePacketSpec& base, const std::vector<int>& ns, const SpectralGrid& packet_grid,
                         const PairingKernel& k);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nslab

// Pseudospectral fields on the periodic cube [0, L)^3.
//
// Coefficients follow fhat(k) = L^-3 * integral exp(-2 pi i k.x / L) f(x) dx on
// the lattice k in {-N/2+1, ..., N/2}^3.  Storage is the half spectrum produced
// by a real-to-complex transform: index (i3, i2, i1) with i1 in [0, N/2].
// Physical samples are stored x1-fastest, x_j = j L / N.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nslab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

struct SpectralGrid {
    double L = 1.0;
    int N = 32;
    double dealias = 2.0 / 3.0;

    void validate() const;
    std::size_t physical_size() const { return std::size_t(N) * N * N; }
    std::size_t spectral_size() const { return std::size_t(N) * N * (N / 2 + 1); }
    int half() const { return N / 2 + 1; }
    double spacing() const { return L / N; }
    double volume() const { return L * L * L; }
    bool operator==(const SpectralGrid& o) const { return L == o.L && N == o.N && dealias == o.dealias; }
    bool operator!=(const SpectralGrid& o) const { return !(*this == o); }
};

// Signed wavenumber for a storage index along a full axis.
inline int wavenumber(int idx, int N) { return idx <= N / 2 ? idx : idx - N; }

struct ScalarField {
    SpectralGrid grid;
    std::vector<cplx> c;

    ScalarField() = default;
    explicit ScalarField(const SpectralGrid& g) : grid(g), c(g.spectral_size(), cplx(0.0, 0.0)) {}

    static ScalarField from_physical(const SpectralGrid& g, const std::vector<double>& samples);
    std::vector<double> to_physical() const;
    cplx mean() const { return c[0]; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
};

struct VectorField {
    std::array<ScalarField, 3> comp;

    VectorField() = default;
    explicit VectorField(const SpectralGrid& g) : comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}

    const SpectralGrid& grid() const { return comp[0].grid; }
    ScalarField& operator[](int i) { return comp[i]; }
    const ScalarField& operator[](int i) const { return comp[i]; }

    static VectorField from_physical(const SpectralGrid& g, const std::array<std::vector<double>, 3>& s);
    std::array<std::vector<double>, 3> to_physical() const;
    Vec3 mean() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double s);
    VectorField& axpy(double a, const VectorField& x);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

// Visits every stored mode with its signed wavenumber and the multiplicity
// the mode carries in full-lattice sums (1 or 2 by Hermitian symmetry).
template <class F>
void for_each_mode(const SpectralGrid& g, F&& f) {
    const int N = g.N, H = g.half();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < N; ++i3) {
        const int k3 = wavenumber(i3, N);
        for (int i2 = 0; i2 < N; ++i2) {
            const int k2 = wavenumber(i2, N);
            for (int i1 = 0; i1 < H; ++i1, ++idx) {
                const double w = (i1 == 0 || i1 == N / 2) ? 1.0 : 2.0;
                f(idx, i1, k2, k3, w);
            }
        }
    }
}

bool is_nyquist(const SpectralGrid& g, int k1, int k2, int k3);
bool is_dealiased_out(const SpectralGrid& g, int k1, int k2, int k3);

// Linear Fourier multipliers.
ScalarField derivative(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
ScalarField inverse_laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);
VectorField inverse_laplacian(const VectorField& u);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& u);
VectorField curl(const VectorField& u);
VectorField leray_project(const VectorField& u);
// u = -Delta^-1 curl(omega), so that biot_savart(curl u) = u for mean-zero divergence-free u.
VectorField biot_savart(const VectorField& omega);
VectorField heat_semigroup(const VectorField& u, double t, double eps = 0.0);
ScalarField heat_semigroup(const ScalarField& f, double t, double eps = 0.0);
double heat_symbol(const SpectralGrid& g, int k1, int k2, int k3, double eps);

void dealias(ScalarField& f);
void dealias(VectorField& u);
void zero_nyquist(ScalarField& f);

// Pointwise product in physical space, dealiased.
ScalarField product(const ScalarField& a, const ScalarField& b);

// Phase shift: returns f(x - x0).
ScalarField translate(const ScalarField& f, const Vec3& x0);
VectorField translate(const VectorField& u, const Vec3& x0);

// Max |f| on the 2x oversampled grid (Euclidean magnitude for vector fields).
double sup_norm(const ScalarField& f);
double sup_norm(const VectorField& u);
std::vector<double> oversampled(const ScalarField& f, int factor);

// Evaluates the trigonometric polynomial at an arbitrary point.
double evaluate(const ScalarField& f, const Vec3& x);

// Samples a callable f(x) on the physical grid.
template <class F>
std::vector<double> sample_grid(const SpectralGrid& g, F&& f) {
    std::vector<double> out(g.physical_size());
    const double h = g.spacing();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < g.N; ++i3)
        for (int i2 = 0; i2 < g.N; ++i2)
            for (int i1 = 0; i1 < g.N; ++i1, ++idx) out[idx] = f(Vec3{i1 * h, i2 * h, i3 * h});
    return out;
}

template <class F>
VectorField sample_vector(const SpectralGrid& g, F&& f) {
    std::array<std::vector<double>, 3> s;
    for (auto& v : s) v.resize(g.physical_size());
    const double h = g.spacing();
    std::size_t idx = 0;
    for (int i3 = 0; i3 < g.N; ++i3)
        for (int i2 = 0; i2 < g.N; ++i2)
            for (int i1 = 0; i1 < g.N; ++i1, ++idx) {
                const Vec3 v = f(Vec3{i1 * h, i2 * h, i3 * h});
                s[0][idx] = v[0];
                s[1][idx] = v[1];
                s[2][idx] = v[2];
            }
    return VectorField::from_physical(g, s);
}

// Raw transforms on contiguous buffers (forward includes the N^-3 factor).
void forward_transform(int N, const double* in, cplx* out);
void inverse_transform(int N, const cplx* in, double* out);

}  // namespace nslab

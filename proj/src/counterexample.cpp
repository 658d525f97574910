#include "counterexample.hpp"

#include "function_spaces.hpp"
#include "spherical.hpp"

#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFilterStrength = 36.0;
constexpr double kFilterOrder = 4.0;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// int_0^1 bump(s) s^2 ds
double unit_bump_moment() {
    static const double value = [] {
        const auto c = Chebyshev::make(401, 0.0, 1.0);
        double s = 0.0;
        for (int j = 0; j < c.size(); ++j) s += c.quad[j] * bump(c.x[j]) * c.x[j] * c.x[j];
        return s;
    }();
    return value;
}

int pair_slot(int i, int j) {
    if (i > j) std::swap(i, j);
    static const int slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return slot[i][j];
}

// Six-point Lagrange weights for nodes -2..3 at fractional offset t in [0, 1).
std::array<double, 6> lagrange6(double t) {
    std::array<double, 6> w{};
    for (int m = -2; m <= 3; ++m) {
        double p = 1.0;
        for (int q = -2; q <= 3; ++q)
            if (q != m) p *= (t - q) / double(m - q);
        w[m + 2] = p;
    }
    return w;
}

int wrap(long long i, int N) { return int(((i % N) + N) % N); }

struct AxisStencil {
    std::vector<long long> base;  // first node (unwrapped)
    std::vector<std::array<double, 6>> w;
    long long lo = 0, hi = 0;     // unwrapped node range touched
};

AxisStencil axis_stencil(const std::vector<double>& pos, double h) {
    AxisStencil a;
    for (double p : pos) {
        const double s = p / h;
        const double fl = std::floor(s);
        a.base.push_back((long long)fl - 2);
        a.w.push_back(lagrange6(s - fl));
    }
    a.lo = a.base.front();
    a.hi = a.base.front() + 5;
    for (auto b : a.base) {
        a.lo = std::min(a.lo, b);
        a.hi = std::max(a.hi, b + 5);
    }
    return a;
}

}  // namespace

double bump(double s) {
    if (std::abs(s) >= 1) return 0.0;
    return std::exp(-1 / (1 - s * s));
}

void WavePacketSpec::validate() const {
    if (n < 1) throw std::invalid_argument("packet frequency n must be positive");
    if (!(chi_radius > 0)) throw std::invalid_argument("packet radius must be positive");
    if (norm(xi) == 0.0) throw std::invalid_argument("packet frequency vector must be nonzero");
    if (norm(polarisation()) <= 1e-12 * norm(xi) * norm(eta_dir))
        throw std::invalid_argument("xi x eta vanishes: the packet is identically zero");
}

Vec3 WavePacketSpec::polarisation() const { return cross(xi, eta_dir); }

double RadialTestFunction::normalisation() const { return 1 / (4 * kPi * radius * radius * radius * unit_bump_moment()); }

double RadialTestFunction::operator()(const Vec3& x) const { return normalisation() * bump(norm(x) / radius); }

void check_packet_grid(const WavePacketSpec& spec, const SpectralGrid& g) {
    spec.validate();
    g.validate();
    const double wavelength = 2 * kPi / (spec.n * norm(spec.xi));
    if (wavelength / g.spacing() < 4 * (1 - 1e-12))
        throw std::invalid_argument("packet grid has fewer than 4 points per wavelength at n = " + std::to_string(spec.n));
    if (g.L / 2 < spec.chi_radius + 1) throw std::invalid_argument("packet grid leaves less than unit margin around the bump");
}

VectorField wave_packet(const WavePacketSpec& spec, const SpectralGrid& g) {
    check_packet_grid(spec, g);
    const double n = spec.n, c = g.L / 2;
    const auto potential = sample_vector(g, [&](const Vec3& x) {
        const Vec3 y{x[0] - c, x[1] - c, x[2] - c};
        const double s = bump(norm(y) / spec.chi_radius) * std::sin(n * dot(spec.xi, y));
        return Vec3{s * spec.eta_dir[0], s * spec.eta_dir[1], s * spec.eta_dir[2]};
    });
    auto u = curl(potential);
    u *= std::pow(n, -2.5);
    return u;
}

double leading_remainder(const WavePacketSpec& spec, const SpectralGrid& g, const VectorField& u) {
    const auto w = spec.polarisation();
    const double n = spec.n, amp = std::pow(n, -1.5), c = g.L / 2;
    const auto lead = sample_vector(g, [&](const Vec3& x) {
        const Vec3 y{x[0] - c, x[1] - c, x[2] - c};
        const double s = amp * std::cos(n * dot(spec.xi, y)) * bump(norm(y) / spec.chi_radius);
        return Vec3{s * w[0], s * w[1], s * w[2]};
    });
    return l2_norm(u - lead);
}

PairingKernel PairingKernel::compute(const RadialTestFunction& psi, const SpectralGrid& box) {
    box.validate();
    if (psi.component < 0 || psi.component > 2) throw std::invalid_argument("test function component must be 0, 1 or 2");
    if (box.L < 16 * psi.radius) throw std::invalid_argument("kernel box must be at least 8 test-function diameters");
    PairingKernel k;
    k.box = box;
    k.component = psi.component;
    const double L = box.L, kf = 2 * kPi / L, kn = kPi * box.N / L;
    // Continuous radial transform of psi by Clenshaw-Curtis, memoised on |k|^2,
    // times a radial filter that mollifies psi at grid scale.
    const auto quad = Chebyshev::make(257, 0.0, psi.radius);
    const double C = psi.normalisation();
    std::vector<double> prof(quad.size());
    for (int j = 0; j < quad.size(); ++j) prof[j] = 4 * kPi * quad.quad[j] * C * bump(quad.x[j] / psi.radius) * quad.x[j] * quad.x[j];
    std::vector<double> table(3 * (box.N / 2) * (box.N / 2) + 1, std::nan(""));
    auto transform = [&](int k2) {
        double& v = table[k2];
        if (!std::isnan(v)) return v;
        const double kappa = kf * std::sqrt(double(k2));
        double s = 0.0;
        for (int j = 0; j < quad.size(); ++j) {
            const double x = kappa * quad.x[j];
            s += prof[j] * (x == 0.0 ? 1.0 : std::sin(x) / x);
        }
        v = s * std::exp(-kFilterStrength * std::pow(kappa / kn, kFilterOrder)) / box.volume();
        return v;
    };
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            ScalarField f(box);
            for_each_mode(box, [&](std::size_t idx, int k1, int k2, int k3, double) {
                if ((k1 == 0 && k2 == 0 && k3 == 0) || is_nyquist(box, k1, k2, k3)) return;
                const Vec3 kv{kf * k1, kf * k2, kf * k3};
                const double s = kv[i] * kv[j] * kv[psi.component] / dot(kv, kv);
                f.c[idx] = cplx(0.0, s * transform(k1 * k1 + k2 * k2 + k3 * k3));
            });
            k.K[pair_slot(i, j)] = f.to_physical();
        }
    return k;
}

double PairingKernel::at(int i, int j, const Vec3& x) const {
    const int N = box.N;
    const double h = box.spacing();
    const auto& K0 = K[pair_slot(i, j)];
    long long b[3];
    std::array<double, 6> w[3];
    for (int a = 0; a < 3; ++a) {
        const double s = x[a] / h, fl = std::floor(s);
        b[a] = (long long)fl - 2;
        w[a] = lagrange6(s - fl);
    }
    double sum = 0.0;
    for (int m3 = 0; m3 < 6; ++m3)
        for (int m2 = 0; m2 < 6; ++m2) {
            const std::size_t row = (std::size_t(wrap(b[2] + m3, N)) * N + wrap(b[1] + m2, N)) * N;
            double r = 0.0;
            for (int m1 = 0; m1 < 6; ++m1) r += w[0][m1] * K0[row + wrap(b[0] + m1, N)];
            sum += w[2][m3] * w[1][m2] * r;
        }
    return sum;
}

double PairingKernel::contract(const Vec3& w, const Vec3& x) const {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += at(i, j, x) * w[i] * w[j];
    return s;
}

double point_mass_kernel(int i, int j, int c, const Vec3& x) {
    // d_i d_j d_c r^{-1} = 3 (x_i d_jc + x_j d_ic + x_c d_ij) r^{-5} - 15 x_i x_j x_c r^{-7}
    const double r = norm(x);
    const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    const double t = 3 * (x[i] * d(j, c) + x[j] * d(i, c) + x[c] * d(i, j)) / std::pow(r, 5) -
                     15 * x[i] * x[j] * x[c] / std::pow(r, 7);
    return -t / (4 * kPi);
}

double x0_pairing(const VectorField& u, const Vec3& centre, const PairingKernel& k, double support_radius) {
    const auto& g = u.grid();
    const double Lk = k.box.L, hk = k.box.spacing();
    for (int a = 0; a < 3; ++a)
        if (std::abs(centre[a]) + g.L / 2 + 3 * hk > Lk / 2)
            throw std::invalid_argument("packet box overflows the kernel box fundamental domain");
    if (norm(centre) - support_radius <= 0) throw std::invalid_argument("packet support overlaps the test-function centre");
    const auto lap = laplacian(u).to_physical();
    const int Np = g.N, Nk = k.box.N;
    const double hp = g.spacing();
    std::array<AxisStencil, 3> st;
    for (int a = 0; a < 3; ++a) {
        std::vector<double> pos(Np);
        for (int i = 0; i < Np; ++i) pos[i] = centre[a] + i * hp - g.L / 2;
        st[a] = axis_stencil(pos, hk);
    }
    const std::size_t n2 = std::size_t(st[1].hi - st[1].lo + 1), n3 = std::size_t(st[2].hi - st[2].lo + 1);
    double total = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const auto& K = k.K[pair_slot(i, j)];
            // Axis 1.
            std::vector<double> T1(n3 * n2 * Np);
            for (std::size_t q3 = 0; q3 < n3; ++q3)
                for (std::size_t q2 = 0; q2 < n2; ++q2) {
                    const std::size_t row =
                        (std::size_t(wrap(st[2].lo + (long long)q3, Nk)) * Nk + wrap(st[1].lo + (long long)q2, Nk)) * Nk;
                    double* out = &T1[(q3 * n2 + q2) * Np];
                    for (int i1 = 0; i1 < Np; ++i1) {
                        double s = 0.0;
                        for (int m = 0; m < 6; ++m) s += st[0].w[i1][m] * K[row + wrap(st[0].base[i1] + m, Nk)];
                        out[i1] = s;
                    }
                }
            // Axis 2.
            std::vector<double> T2(n3 * Np * Np, 0.0);
            for (std::size_t q3 = 0; q3 < n3; ++q3)
                for (int i2 = 0; i2 < Np; ++i2) {
                    double* out = &T2[(q3 * Np + i2) * Np];
                    for (int m = 0; m < 6; ++m) {
                        const double w = st[1].w[i2][m];
                        const double* in = &T1[(q3 * n2 + std::size_t(st[1].base[i2] + m - st[1].lo)) * Np];
                        for (int i1 = 0; i1 < Np; ++i1) out[i1] += w * in[i1];
                    }
                }
            // Axis 3 and the quadratic form.
            const double mult = i == j ? 1.0 : 2.0;
            double sum = 0.0;
            std::vector<double> plane(std::size_t(Np) * Np);
            for (int i3 = 0; i3 < Np; ++i3) {
                std::fill(plane.begin(), plane.end(), 0.0);
                for (int m = 0; m < 6; ++m) {
                    const double w = st[2].w[i3][m];
                    const double* in = &T2[std::size_t(st[2].base[i3] + m - st[2].lo) * Np * Np];
                    for (std::size_t p = 0; p < plane.size(); ++p) plane[p] += w * in[p];
                }
                const std::size_t off = std::size_t(i3) * Np * Np;
                for (std::size_t p = 0; p < plane.size(); ++p) sum += plane[p] * lap[i][off + p] * lap[j][off + p];
            }
            total += mult * sum;
        }
    return total * hp * hp * hp;
}

double x0_pairing(const VectorField& u, const Vec3& centre, const RadialTestFunction& psi, const SpectralGrid& box,
                  double support_radius) {
    return x0_pairing(u, centre, PairingKernel::compute(psi, box), support_radius);
}

Vec3 search_x0(const PairingKernel& k, const Vec3& w, double distance, int ntheta, int nphi) {
    Vec3 best{distance, 0.0, 0.0};
    double best_val = -1.0;
    for (int a = 0; a < ntheta; ++a)
        for (int b = 0; b < nphi; ++b) {
            const double th = kPi * (a + 0.5) / ntheta, ph = 2 * kPi * b / nphi;
            const Vec3 x{distance * std::sin(th) * std::cos(ph), distance * std::sin(th) * std::sin(ph),
                         distance * std::cos(th)};
            const double v = std::abs(k.contract(w, x));
            if (v > best_val) {
                best_val = v;
                best = x;
            }
        }
    return best;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

GrowthStudy growth_study(const WavePacketSpec& base, const std::vector<int>& ns, const SpectralGrid& packet_grid,
                         const PairingKernel& k) {
    base.validate();
    for (int n : ns) {
        WavePacketSpec s = base;
        s.n = n;
        check_packet_grid(s, packet_grid);
    }
    GrowthStudy out;
    std::vector<double> xs, ys;
    for (int n : ns) {
        WavePacketSpec s = base;
        s.n = n;
        const auto u = wave_packet(s, packet_grid);
        GrowthRow row;
        row.n = n;
        row.h1 = sobolev_norm(u, 1.0);
        row.h2 = sobolev_norm(u, 2.0);
        row.remainder = leading_remainder(s, packet_grid, u);
        row.x0 = x0_pairing(u, s.x0, k, s.chi_radius);
        out.rows.push_back(row);
        xs.push_back(n);
        ys.push_back(std::abs(row.x0));
    }
    if (ns.size() >= 2) out.slope = loglog_slope(xs, ys);
    for (std::size_t i = 1; i < out.rows.size(); ++i) out.ratios.push_back(out.rows[i].x0 / out.rows[i - 1].x0);
    return out;
}

}  // namespace nslab

#include "mild_solver.hpp"

#include "function_spaces.hpp"

#include <algorithm>
#include <cmath>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

const int kPairs[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};

int pair_index(int i, int j) {
    if (i > j) std::swap(i, j);
    static const int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return table[i][j];
}

// Per-grid wavenumber tables shared by the solver kernels.
struct Modes {
    SpectralGrid g;
    std::vector<double> kx, ky, kz, kk;
    std::vector<unsigned char> keep;

    explicit Modes(const SpectralGrid& grid) : g(grid) {
        const std::size_t n = g.spectral_size();
        kx.resize(n);
        ky.resize(n);
        kz.resize(n);
        kk.resize(n);
        keep.resize(n);
        const double s = 2.0 * kPi / g.L;
        for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
            kx[idx] = s * k1;
            ky[idx] = s * k2;
            kz[idx] = s * k3;
            kk[idx] = kx[idx] * kx[idx] + ky[idx] * ky[idx] + kz[idx] * kz[idx];
            keep[idx] = !(is_nyquist(g, k1, k2, k3) || is_dealiased_out(g, k1, k2, k3));
        });
    }

    const double* axis(int j) const { return j == 0 ? kx.data() : j == 1 ? ky.data() : kz.data(); }

    // Dealiased spectral products u_i v_j + u_j v_i (halved), pair-indexed.
    std::array<std::vector<cplx>, 6> sym_products(const VectorField& u, const VectorField& v) const {
        const bool same = &u == &v;
        const auto pu = u.to_physical();
        const auto pv = same ? pu : v.to_physical();
        std::array<std::vector<cplx>, 6> out;
        std::vector<double> buf(g.physical_size());
        for (int p = 0; p < 6; ++p) {
            const int i = kPairs[p][0], j = kPairs[p][1];
            for (std::size_t x = 0; x < buf.size(); ++x)
                buf[x] = 0.5 * (pu[i][x] * pv[j][x] + pu[j][x] * pv[i][x]);
            out[p].assign(g.spectral_size(), cplx(0.0, 0.0));
            forward_transform(g.N, buf.data(), out[p].data());
            for (std::size_t m = 0; m < out[p].size(); ++m)
                if (!keep[m]) out[p][m] = 0.0;
        }
        return out;
    }

    // -d_j S_ij for a symmetric product tensor S.
    VectorField negative_divergence(const std::array<std::vector<cplx>, 6>& S) const {
        VectorField out(g);
        const std::size_t n = g.spectral_size();
        for (int i = 0; i < 3; ++i) {
            auto& o = out.comp[i].c;
            for (int j = 0; j < 3; ++j) {
                const double* kj = axis(j);
                const auto& s = S[pair_index(i, j)];
                for (std::size_t m = 0; m < n; ++m) o[m] -= cplx(0.0, kj[m]) * s[m];
            }
        }
        return out;
    }

    void project(VectorField& u) const {
        auto& a = u.comp[0].c;
        auto& b = u.comp[1].c;
        auto& c = u.comp[2].c;
        for (std::size_t m = 1; m < kk.size(); ++m) {
            if (kk[m] == 0.0) continue;
            const cplx q = (kx[m] * a[m] + ky[m] * b[m] + kz[m] * c[m]) / kk[m];
            a[m] -= kx[m] * q;
            b[m] -= ky[m] * q;
            c[m] -= kz[m] * q;
        }
    }

    // P B(u, u) + P f.
    VectorField forcing_term(const VectorField& u, const VectorField* f) const {
        VectorField out = negative_divergence(sym_products(u, u));
        if (f) out += *f;
        project(out);
        return out;
    }
};

std::vector<double> exp_factor(const SpectralGrid& g, double t, double eps) {
    std::vector<double> e(g.spectral_size());
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        e[idx] = std::exp(t * heat_symbol(g, k1, k2, k3, eps));
    });
    return e;
}

// phi(t) = int_0^t e^{s Delta} ds per mode.
std::vector<double> phi_factor(const SpectralGrid& g, double t, double eps) {
    std::vector<double> e(g.spectral_size());
    for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double) {
        const double sym = heat_symbol(g, k1, k2, k3, eps);
        e[idx] = sym == 0.0 ? t : std::expm1(t * sym) / sym;
    });
    return e;
}

void scale_modes(VectorField& u, const std::vector<double>& e) {
    for (auto& c : u.comp)
        for (std::size_t m = 0; m < e.size(); ++m) c.c[m] *= e[m];
}

bool finite(const VectorField& u) {
    for (const auto& c : u.comp)
        for (const auto& v : c.c)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void check_data(const DataTriple& data, const SolverConfig& cfg) {
    const auto& g = data.u0.grid();
    g.validate();
    if (!(data.T > 0.0)) throw std::invalid_argument("final time T must be positive");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (cfg.eps < 0.0) throw std::invalid_argument("hyperdissipation must be non-negative");
    if (cfg.sample_stride < 1) throw std::invalid_argument("sample stride must be >= 1");
    for (const auto& f : data.f.samples)
        if (f.grid() != g) throw std::invalid_argument("forcing lives on a different grid than u0");
    if (data.f.times.size() != data.f.samples.size()) throw std::invalid_argument("forcing times and samples differ in length");
    const double div = divergence_l2(data.u0);
    const double scale = std::max(1.0, sobolev_norm(data.u0, 1.0));
    if (div > 1e-10 * scale)
        throw std::invalid_argument("initial velocity is not divergence-free (||div u0|| = " + std::to_string(div) + ")");
}

// Uniform step count not exceeding cfg.dt.
long step_count(double T, double dt) { return std::max(1L, long(std::ceil(T / dt - 1e-9))); }

struct StepContext {
    const Modes& modes;
    const DataTriple& data;
    double dt;
    std::vector<double> e_full, e_half, phi_full, phi_half;

    StepContext(const Modes& m, const DataTriple& d, double h, double eps)
        : modes(m),
          data(d),
          dt(h),
          e_full(exp_factor(m.g, h, eps)),
          e_half(exp_factor(m.g, 0.5 * h, eps)),
          phi_full(phi_factor(m.g, h, eps)),
          phi_half(phi_factor(m.g, 0.5 * h, eps)) {}

    VectorField force_at(double t) const { return data.f.at(t, modes.g); }

    VectorField rhs(const VectorField& u, double t) const {
        if (data.f.empty()) return modes.forcing_term(u, nullptr);
        const VectorField f = force_at(t);
        return modes.forcing_term(u, &f);
    }

    // Exponential midpoint rule: the Duhamel integral over the step with the
    // integrand frozen at the predicted midpoint.
    VectorField midpoint_increment(const VectorField& u, double t) const {
        VectorField half = u;
        scale_modes(half, e_half);
        VectorField n0 = rhs(u, t);
        scale_modes(n0, phi_half);
        half += n0;
        VectorField n1 = rhs(half, t + 0.5 * dt);
        scale_modes(n1, phi_full);
        return n1;
    }
};

void append_sample(Trajectory& tr, const Modes& modes, const DataTriple& data, const VectorField& u, double t) {
    tr.times.push_back(t);
    tr.u.push_back(u);
    tr.p.push_back(pressure(u, data.f.at(t, modes.g)));
    tr.p_linear.push_back({0.0, 0.0, 0.0});
}

Trajectory empty_trajectory(const DataTriple& data, const SolverConfig& cfg) {
    Trajectory tr;
    tr.grid = data.u0.grid();
    tr.eps = cfg.eps;
    tr.f = data.f;
    return tr;
}

}  // namespace

VectorField bilinear(const VectorField& u, const VectorField& v) {
    if (u.grid() != v.grid()) throw std::invalid_argument("bilinear: fields on different grids");
    Modes m(u.grid());
    return m.negative_divergence(m.sym_products(u, v));
}

VectorField advection(const VectorField& u) {
    VectorField b = bilinear(u, u);
    b *= -1.0;
    return b;
}

ScalarField pressure(const VectorField& u, const VectorField& f) {
    const auto& g = u.grid();
    Modes m(g);
    const auto S = m.sym_products(u, u);
    ScalarField p(g);
    for (std::size_t idx = 0; idx < p.c.size(); ++idx) {
        if (m.kk[idx] == 0.0) continue;
        cplx acc = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) acc += m.axis(i)[idx] * m.axis(j)[idx] * S[pair_index(i, j)][idx];
        const cplx divf = cplx(0.0, 1.0) * (m.kx[idx] * f.comp[0].c[idx] + m.ky[idx] * f.comp[1].c[idx] +
                                             m.kz[idx] * f.comp[2].c[idx]);
        p.c[idx] = (-acc - divf) / m.kk[idx];
    }
    return p;
}

double divergence_l2(const VectorField& u) { return l2_norm(divergence(u)); }

Trajectory evolve(const DataTriple& data, const SolverConfig& cfg) {
    check_data(data, cfg);
    const auto& g = data.u0.grid();
    const long n = step_count(data.T, cfg.dt);
    const double dt = data.T / double(n);
    Modes modes(g);
    StepContext ctx(modes, data, dt, cfg.eps);

    Trajectory tr = empty_trajectory(data, cfg);
    VectorField u = data.u0;
    append_sample(tr, modes, data, u, 0.0);
    for (long s = 0; s < n; ++s) {
        const double t = s * dt;
        VectorField inc = ctx.midpoint_increment(u, t);
        scale_modes(u, ctx.e_full);
        u += inc;
        modes.project(u);
        if (!finite(u)) throw NumericalAbort("non-finite velocity at step " + std::to_string(s + 1), s + 1, t + dt);
        if ((s + 1) % cfg.sample_stride == 0 || s + 1 == n) append_sample(tr, modes, data, u, (s + 1) * dt);
    }
    return tr;
}

namespace {

double x1_distance(const std::vector<VectorField>& a, const std::vector<VectorField>& b, double dt) {
    double sup = 0.0, l2 = 0.0;
    std::vector<double> h2(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const VectorField d = a[i] - b[i];
        sup = std::max(sup, sobolev_norm(d, 1.0));
        const double v = sobolev_norm(d, 2.0);
        h2[i] = v * v;
    }
    for (std::size_t i = 0; i + 1 < h2.size(); ++i) l2 += 0.5 * dt * (h2[i] + h2[i + 1]);
    return sup + std::sqrt(l2);
}

}  // namespace

PicardResult picard_solve(const DataTriple& data, const SolverConfig& cfg) {
    check_data(data, cfg);
    const auto& g = data.u0.grid();
    PicardResult res;
    const double a = sobolev_norm(data.u0, 1.0) + forcing_mixed_norm(data.f, g, data.T, 1.0, 1.0);
    res.smallness = std::pow(a, 4) * data.T;
    if (res.smallness > cfg.c_small)
        throw std::invalid_argument("smallness condition violated: (||u0||_H1 + ||f||_L1H1)^4 T = " +
                                    std::to_string(res.smallness) + " > c = " + std::to_string(cfg.c_small));

    const long n = step_count(data.T, cfg.dt);
    const double dt = data.T / double(n);
    Modes modes(g);
    StepContext ctx(modes, data, dt, cfg.eps);

    // Initial iterate: the free evolution e^{t Delta} u0.
    std::vector<VectorField> U(n + 1);
    U[0] = data.u0;
    for (long s = 0; s < n; ++s) {
        U[s + 1] = U[s];
        scale_modes(U[s + 1], ctx.e_full);
    }

    double prev = -1.0;
    for (int it = 1; it <= cfg.max_picard; ++it) {
        std::vector<VectorField> W(n + 1);
        W[0] = data.u0;
        for (long s = 0; s < n; ++s) {
            const VectorField inc = ctx.midpoint_increment(U[s], s * dt);
            W[s + 1] = W[s];
            scale_modes(W[s + 1], ctx.e_full);
            W[s + 1] += inc;
            if (!finite(W[s + 1]))
                throw NumericalAbort("non-finite Picard iterate at step " + std::to_string(s + 1), s + 1, (s + 1) * dt);
        }
        const double d = x1_distance(W, U, dt);
        res.distances.push_back(d);
        U.swap(W);
        res.iterations = it;
        if (prev > 0.0) {
            const double ratio = d / prev;
            res.contraction = std::max(res.contraction, ratio);
            if (ratio >= 1.0 && d >= cfg.picard_tol)
                throw NumericalAbort("Picard iteration is not contracting (factor " + std::to_string(ratio) + ")", it, 0.0);
        }
        if (d < cfg.picard_tol) break;
        if (it == cfg.max_picard)
            throw NumericalAbort("Picard iteration did not converge in " + std::to_string(cfg.max_picard) + " iterations", it, 0.0);
        prev = d;
    }

    res.traj = empty_trajectory(data, cfg);
    for (long s = 0; s <= n; ++s)
        if (s % cfg.sample_stride == 0 || s == n) append_sample(res.traj, modes, data, U[s], s * dt);
    return res;
}

BlowupVerdict continue_max(const DataTriple& data, const SolverConfig& cfg) {
    check_data(data, cfg);
    const auto& g = data.u0.grid();
    BlowupVerdict v;
    const double fsup = forcing_mixed_norm(data.f, g, data.T, kInf, 1.0);
    VectorField u = data.u0;
    double t = 0.0;
    v.final_h1 = sobolev_norm(u, 1.0);
    while (t < data.T * (1.0 - 1e-12)) {
        if (int(v.window_start.size()) >= cfg.max_windows) break;
        const double h = sobolev_norm(u, 1.0) + fsup;
        double len = h > 0.0 ? cfg.c_small / std::pow(h, 4) : data.T;
        len = std::min(std::max(len, cfg.dt), data.T - t);
        v.window_start.push_back(t);
        v.window_h1.push_back(h);

        DataTriple w;
        w.u0 = u;
        w.T = len;
        w.f = data.f;
        for (auto& tt : w.f.times) tt -= t;
        SolverConfig wc = cfg;
        wc.sample_stride = std::numeric_limits<int>::max();
        wc.dt = std::min(cfg.dt, len);
        bool finite_end = true;
        try {
            Trajectory tr = evolve(w, wc);
            u = tr.u.back();
        } catch (const NumericalAbort&) {
            finite_end = false;
        }
        t += len;
        v.final_h1 = finite_end ? sobolev_norm(u, 1.0) : kInf;
        if (!finite_end || !(v.final_h1 <= cfg.blowup)) {
            v.completed = false;
            v.T_star = t;
            return v;
        }
    }
    v.completed = t >= data.T * (1.0 - 1e-12);
    v.T_star = t;
    return v;
}

TimeStencil time_stencil(const std::vector<double>& t, std::size_t i) {
    const std::size_t n = t.size();
    if (n < 3) throw std::invalid_argument("time derivative needs at least three samples");
    TimeStencil s;
    if (i == 0) {
        const double h1 = t[1] - t[0], h2 = t[2] - t[1];
        s = {{0, 1, 2}, {-(2 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))}};
    } else if (i == n - 1) {
        const double h1 = t[n - 2] - t[n - 3], h2 = t[n - 1] - t[n - 2];
        s = {{n - 3, n - 2, n - 1}, {h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2 * h2 + h1) / (h2 * (h1 + h2))}};
    } else {
        const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
        s = {{i - 1, i, i + 1}, {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))}};
    }
    return s;
}

std::vector<double> residual(const Trajectory& traj) {
    const std::size_t n = traj.size();
    if (n < 3) throw std::invalid_argument("residual needs at least three samples");
    const auto& g = traj.grid;
    Modes modes(g);
    const auto& t = traj.times;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto st = time_stencil(t, i);
        VectorField r = st.w[0] * traj.u[st.idx[0]];
        r.axpy(st.w[1], traj.u[st.idx[1]]);
        r.axpy(st.w[2], traj.u[st.idx[2]]);
        const VectorField& u = traj.u[i];
        r -= modes.negative_divergence(modes.sym_products(u, u));
        r -= laplacian(u);
        if (traj.eps > 0.0) r.axpy(traj.eps, laplacian(laplacian(u)));
        r += gradient(traj.p[i]);
        if (!traj.p_linear.empty())
            for (int k = 0; k < 3; ++k) r.comp[k].c[0] += traj.p_linear[i][k];
        if (!traj.f.empty()) r -= traj.f.at(t[i], g);
        out[i] = l2_norm(r);
    }
    return out;
}

}  // namespace nslab

#include "estimate_harness.hpp"

#include "function_spaces.hpp"
#include "littlewood_paley.hpp"
#include "mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Calls f(index, x) for every point of the M^3 grid of period L (x1 fastest).
template <class F>
void for_each_point(double L, int M, F&& f) {
    const double h = L / M;
    std::size_t idx = 0;
    for (int i3 = 0; i3 < M; ++i3)
        for (int i2 = 0; i2 < M; ++i2)
            for (int i1 = 0; i1 < M; ++i1, ++idx) f(idx, Vec3{i1 * h, i2 * h, i3 * h});
}

std::vector<double> squared_magnitude(const VectorField& u, int factor) {
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) {
        const auto p = factor == 1 ? u[i].to_physical() : oversampled(u[i], factor);
        if (out.empty()) out.assign(p.size(), 0.0);
        for (std::size_t j = 0; j < p.size(); ++j) out[j] += p[j] * p[j];
    }
    return out;
}

// sum_i |grad u_i|^2 pointwise.
std::vector<double> gradient_squared(const VectorField& u, int factor) {
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) {
        const auto s = squared_magnitude(gradient(u[i]), factor);
        if (out.empty()) out.assign(s.size(), 0.0);
        for (std::size_t j = 0; j < s.size(); ++j) out[j] += s[j];
    }
    return out;
}

double weighted_integral(const std::vector<double>& v, const std::vector<double>& w, double cell) {
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * w[j];
    return s * cell;
}

struct ModeIntegrals {
    double energy = 0.0;  // int |u_k|^2
    double work = 0.0;    // int Re(u_k . conj f_k)
};

// Integrals over one step of length h for a mode with decay rate nu, modelling
// u_k(s) = a + b e^{-nu s} through both endpoint values (exact for the heat
// flow with a constant source) and f_k linear in s.
// Corrects both integrals with the Euler-Maclaurin endpoint term of the
// model error, using u' = -nu u + n + f at the endpoints (nu h <= 1 only).
void endpoint_correction(ModeIntegrals& out, const cplx* u0, const cplx* u1, const cplx* f0, const cplx* f1,
                         const cplx* dev0, const cplx* dev1, double h) {
    const double c = h * h / 12;
    for (int i = 0; i < 3; ++i) {
        out.energy += c * 2 * (std::conj(u0[i]) * dev0[i] - std::conj(u1[i]) * dev1[i]).real();
        if (f0) out.work += c * (dev0[i] * std::conj(f0[i]) - dev1[i] * std::conj(f1[i])).real();
    }
}

ModeIntegrals mode_integrals(const cplx* u0, const cplx* u1, const cplx* f0, const cplx* f1, const cplx* n0,
                             const cplx* n1, double nu, double h) {
    ModeIntegrals out;
    const double x = nu * h;
    const auto source = [&](const cplx* n, const cplx* f, int i) { return n[i] + (f ? f[i] : cplx(0.0)); };
    if (x < 1e-6) {
        for (int i = 0; i < 3; ++i) {
            out.energy += h * (std::norm(u0[i]) + (u0[i] * std::conj(u1[i])).real() + std::norm(u1[i])) / 3;
            if (f0) {
                const cplx du = u1[i] - u0[i], df = f1[i] - f0[i];
                out.work += h * (u0[i] * std::conj(f0[i]) + (u0[i] * std::conj(df) + du * std::conj(f0[i])) / 2.0 +
                                 du * std::conj(df) / 3.0)
                                    .real();
            }
        }
        cplx dev0[3], dev1[3];
        for (int i = 0; i < 3; ++i) {
            const cplx slope = (u1[i] - u0[i]) / h;
            dev0[i] = source(n0, f0, i) - nu * u0[i] - slope;
            dev1[i] = source(n1, f1, i) - nu * u1[i] - slope;
        }
        endpoint_correction(out, u0, u1, f0, f1, dev0, dev1, h);
        return out;
    }
    const double e = std::exp(-x);
    const double p0 = -std::expm1(-x) / nu;
    const double p0b = -std::expm1(-2 * x) / (2 * nu);
    const double p1 = x < 1e-4 ? h * (0.5 - x / 3 + x * x / 8) : (1 - e * (1 + x)) / (nu * nu * h);
    cplx dev0[3], dev1[3];
    for (int i = 0; i < 3; ++i) {
        const cplx a = (u1[i] - e * u0[i]) / (1 - e);
        const cplx b = u0[i] - a;
        dev0[i] = source(n0, f0, i) - nu * a;
        dev1[i] = source(n1, f1, i) - nu * a;
        out.energy += std::norm(a) * h + 2 * (a * std::conj(b)).real() * p0 + std::norm(b) * p0b;
        if (f0) {
            const cplx df = f1[i] - f0[i];
            out.work += (a * std::conj(f0[i]) * h + a * std::conj(df) * (h / 2) + b * std::conj(f0[i]) * p0 +
                         b * std::conj(df) * p1)
                            .real();
        }
    }
    if (x <= 1.0) endpoint_correction(out, u0, u1, f0, f1, dev0, dev1, h);
    return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& v) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
    return out;
}

void require_divergence_free(const ForcingSeries& f) {
    for (const auto& s : f.samples) {
        const double d = l2_norm(divergence(s));
        if (d > 1e-10 * std::max(1.0, sobolev_norm(s, 1.0)))
            throw std::invalid_argument("energy budget needs divergence-free forcing (apply leray_project first)");
    }
}

double chi_derivative(double s, int order) {
    const double h = 1e-4;
    if (order == 1) return (cutoff_profile(s + h) - cutoff_profile(s - h)) / (2 * h);
    return (cutoff_profile(s + h) - 2 * cutoff_profile(s) + cutoff_profile(s - h)) / (h * h);
}

}  // namespace

double periodic_distance(const SpectralGrid& g, const Vec3& x, const Vec3& x0) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        double d = x[i] - x0[i];
        d -= g.L * std::round(d / g.L);
        s += d * d;
    }
    return std::sqrt(s);
}

double cutoff_profile(double s) { return lp_phi(s + 2.0); }

void StaticCutoff::validate() const {
    if (!(r > 0.0 && R > 0.0 && r < R / 2)) throw std::invalid_argument("cutoff radii must satisfy 0 < r < R/2");
}

double StaticCutoff::eta(const SpectralGrid& g, const Vec3& x) const {
    const double d = periodic_distance(g, x, x0);
    return exterior ? cutoff_profile((R - d) / r) : cutoff_profile((d - R) / r);
}

double cutoff_derivative_constant(const StaticCutoff& c, const SpectralGrid& g) {
    c.validate();
    double K = 0.0;
    for_each_point(g.L, g.N, [&](std::size_t, const Vec3& x) {
        const double d = periodic_distance(g, x, c.x0);
        const double s = c.exterior ? (c.R - d) / c.r : (d - c.R) / c.r;
        const double d1 = std::abs(chi_derivative(s, 1));
        const double d2 = std::abs(chi_derivative(s, 2));
        const double tangential = d > 0.0 ? c.r * d1 / d : 0.0;
        K = std::max({K, c.eta(g, x), d1, d2, tangential});
    });
    return K;
}

EnergyReport energy_budget(const Trajectory& traj, const StaticCutoff* cutoff) {
    if (traj.size() < 2) throw std::invalid_argument("energy budget needs at least two samples");
    if (!traj.f.empty()) require_divergence_free(traj.f);
    const auto& g = traj.grid;
    const auto& t = traj.times;
    const double T = t.back() - t.front();
    const double L3 = g.volume();
    const double E = energy_functional(traj.u[0], traj.f, T);
    EnergyReport rep;
    rep.times = t;
    const std::size_t n = traj.size();

    if (!cutoff) {
        rep.global = true;
        const double q = 2 * kPi / g.L;
        rep.dissipation.assign(n, 0.0);
        rep.work.assign(n, 0.0);
        double grad_int = 0.0, sup_l2 = 0.0;
        VectorField na(g), nb = bilinear(traj.u[0], traj.u[0]);
        for (std::size_t i = 0; i < n; ++i) {
            rep.local_energy.push_back(0.5 * std::pow(l2_norm(traj.u[i]), 2));
            sup_l2 = std::max(sup_l2, l2_norm(traj.u[i]));
            if (i == 0) continue;
            const double h = t[i] - t[i - 1];
            const VectorField& ua = traj.u[i - 1];
            const VectorField& ub = traj.u[i];
            na = std::move(nb);
            nb = bilinear(ub, ub);
            VectorField fa(g), fb(g);
            if (!traj.f.empty()) {
                fa = traj.f.at(t[i - 1], g);
                fb = traj.f.at(t[i], g);
            }
            if (!traj.p_linear.empty())
                for (int c = 0; c < 3; ++c) {
                    fa.comp[c].c[0] -= traj.p_linear[i - 1][c];
                    fb.comp[c].c[0] -= traj.p_linear[i][c];
                }
            double d = 0.0, gi = 0.0, w = 0.0;
            for_each_mode(g, [&](std::size_t idx, int k1, int k2, int k3, double wt) {
                const double kk = q * q * double(k1 * k1 + k2 * k2 + k3 * k3);
                const double nu = kk + traj.eps * kk * kk;
                const cplx u0[3] = {ua.comp[0].c[idx], ua.comp[1].c[idx], ua.comp[2].c[idx]};
                const cplx u1[3] = {ub.comp[0].c[idx], ub.comp[1].c[idx], ub.comp[2].c[idx]};
                const cplx f0[3] = {fa.comp[0].c[idx], fa.comp[1].c[idx], fa.comp[2].c[idx]};
                const cplx f1[3] = {fb.comp[0].c[idx], fb.comp[1].c[idx], fb.comp[2].c[idx]};
                const cplx n0[3] = {na.comp[0].c[idx], na.comp[1].c[idx], na.comp[2].c[idx]};
                const cplx n1[3] = {nb.comp[0].c[idx], nb.comp[1].c[idx], nb.comp[2].c[idx]};
                const auto m = mode_integrals(u0, u1, f0, f1, n0, n1, nu, h);
                d += wt * nu * m.energy;
                gi += wt * kk * m.energy;
                w += wt * m.work;
            });
            rep.dissipation[i] = rep.dissipation[i - 1] + L3 * d;
            rep.work[i] = rep.work[i - 1] + L3 * w;
            grad_int += L3 * gi;
        }
        double worst = 0.0, wmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, std::abs(rep.local_energy[i] - rep.local_energy[0] + rep.dissipation[i] - rep.work[i]));
            wmax = std::max(wmax, std::abs(rep.work[i]));
        }
        const double scale = rep.local_energy[0] + rep.dissipation.back() + wmax;
        rep.identity_defect = scale > 0.0 ? worst / scale : 0.0;
        rep.lhs = sup_l2 + std::sqrt(grad_int);
        rep.rhs = std::sqrt(E);
        rep.rhs_terms = {rep.rhs};
        rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
        return rep;
    }

    cutoff->validate();
    rep.global = false;
    const double cell = std::pow(g.spacing(), 3);
    std::vector<double> w4(g.physical_size()), inner(g.physical_size()), outer(g.physical_size());
    for_each_point(g.L, g.N, [&](std::size_t j, const Vec3& x) {
        w4[j] = std::pow(cutoff->eta(g, x), 4);
        const double d = periodic_distance(g, x, cutoff->x0);
        if (cutoff->exterior) {
            inner[j] = d > cutoff->R + cutoff->r ? 1.0 : 0.0;
            outer[j] = d > cutoff->R ? 1.0 : 0.0;
        } else {
            inner[j] = d < cutoff->R - cutoff->r ? 1.0 : 0.0;
            outer[j] = d < cutoff->R ? 1.0 : 0.0;
        }
    });
    std::vector<double> x1(n), grad_in(n), f_out(n, 0.0);
    double sup_in = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto u2 = squared_magnitude(traj.u[i], 1);
        const auto g2 = gradient_squared(traj.u[i], 1);
        rep.local_energy.push_back(0.5 * weighted_integral(u2, w4, cell));
        x1[i] = weighted_integral(g2, w4, cell);
        grad_in[i] = weighted_integral(g2, inner, cell);
        sup_in = std::max(sup_in, std::sqrt(weighted_integral(u2, inner, cell)));
        if (!traj.f.empty()) f_out[i] = std::sqrt(weighted_integral(squared_magnitude(traj.f.at(t[i], g), 1), outer, cell));
    }
    rep.dissipation = cumulative_trapezoid(t, x1);
    rep.lhs = sup_in + std::sqrt(cumulative_trapezoid(t, grad_in).back());
    const double data = std::sqrt(weighted_integral(squared_magnitude(traj.u[0], 1), outer, cell));
    const double forcing = cumulative_trapezoid(t, f_out).back();
    const double r = cutoff->r;
    rep.rhs_terms = {data, forcing, std::sqrt(E * T) / r, std::pow(E, 1.5) * std::sqrt(T) / (r * r)};
    rep.rhs = 0.0;
    for (double v : rep.rhs_terms) rep.rhs += v;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

SpeedReport total_speed(const Trajectory& traj, const DataTriple& data) {
    const double T = traj.times.back() - traj.times.front();
    const double L = traj.grid.L;
    if (T > L * L * (1 + 1e-12)) throw std::invalid_argument("total speed needs T <= L^2 (lota)");
    std::vector<double> s;
    for (const auto& u : traj.u) s.push_back(sup_norm(u));
    SpeedReport rep;
    rep.value = traj.size() > 1 ? mixed_norm(traj.times, s, 1.0) : 0.0;
    const double E = energy_functional(data.u0, data.f, data.T);
    rep.bound = std::sqrt(E) * std::pow(T, 0.25) + E;
    rep.ratio = rep.bound > 0.0 ? rep.value / rep.bound : 0.0;
    return rep;
}

EnstrophyReport enstrophy_localisation(const Trajectory& traj, const DataTriple& data, const EnstrophyOptions& o) {
    if (traj.size() < 2) throw std::invalid_argument("enstrophy localisation needs at least two samples");
    if (!(o.delta > 0.0 && o.c > 0.0 && o.C > 0.0 && o.R > 0.0 && o.r > 0.0))
        throw std::invalid_argument("enstrophy localisation needs positive delta, c, C, R, r");
    const auto& g = traj.grid;
    const auto& t = traj.times;
    const std::size_t n = traj.size();
    const double T = data.T;
    const double E = energy_functional(data.u0, data.f, T);
    const int factor = 2;
    const int M = factor * g.N;
    const double cell = std::pow(g.L / M, 3);

    EnstrophyReport rep;
    rep.times = t;
    rep.delta = o.delta;

    std::vector<double> ball(std::size_t(M) * M * M), inner(ball.size()), dist(ball.size());
    for_each_point(g.L, M, [&](std::size_t j, const Vec3& x) {
        dist[j] = periodic_distance(g, x, o.x0);
        ball[j] = dist[j] < o.R ? 1.0 : 0.0;
        inner[j] = dist[j] < o.R - o.r ? 1.0 : 0.0;
    });

    // Hypotheses.
    std::vector<double> curl_f(n, 0.0);
    if (!data.f.empty())
        for (std::size_t i = 0; i < n; ++i)
            curl_f[i] = std::sqrt(weighted_integral(squared_magnitude(curl(data.f.at(t[i], g)), factor), ball, cell));
    rep.eeta = std::sqrt(weighted_integral(squared_magnitude(curl(data.u0), factor), ball, cell)) +
               cumulative_trapezoid(t, curl_f).back();
    rep.smallness = std::pow(o.delta, 4) * T + std::pow(o.delta, 5) * std::sqrt(E) * T;
    rep.r_required = o.C * (E + std::sqrt(E) * std::pow(T, 0.25) + 1.0 / (o.delta * o.delta));
    if (rep.eeta > o.delta) rep.violations.push_back("eeta");
    if (rep.smallness > o.c) rep.violations.push_back("delta-4");
    if (!(o.r > rep.r_required && o.r < o.R / 2)) rep.violations.push_back("r-large");
    if (o.R > g.L || T > g.L * g.L * (1 + 1e-12)) rep.violations.push_back("periodic");

    // Shrinking radius and Lipschitz weight.
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i) speed[i] = sup_norm(traj.u[i]);
    const auto travelled = cumulative_trapezoid(t, speed);
    const double slope = std::pow(o.c, -0.1) * o.delta * o.delta;
    for (std::size_t i = 0; i < n; ++i) rep.radius.push_back(o.R - o.r / 8 - travelled[i] / o.c);
    auto eta = [&](std::size_t i, double d) { return std::min(std::max(0.0, slope * (rep.radius[i] - d)), 1.0); };

    std::vector<double> grad_in(n), weight(ball.size());
    double sup_in = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto w = curl(traj.u[i]);
        const auto w2 = squared_magnitude(w, factor);
        for (std::size_t j = 0; j < weight.size(); ++j) weight[j] = eta(i, dist[j]);
        rep.W.push_back(0.5 * weighted_integral(w2, weight, cell));
        sup_in = std::max(sup_in, std::sqrt(weighted_integral(w2, inner, cell)));
        grad_in[i] = weighted_integral(gradient_squared(w, factor), inner, cell);
    }
    rep.inner_norm = sup_in + std::sqrt(cumulative_trapezoid(t, grad_in).back());
    double wmax = 0.0;
    for (double v : rep.W) wmax = std::max(wmax, v);
    rep.w_ratio = wmax / (o.delta * o.delta);
    if (rep.W[0] > 0.5 * o.delta * o.delta * (1 + 1e-9) && rep.eeta <= o.delta) rep.violations.push_back("w-init");

    // Recession of the weight: d(eta)/dt <= -(1/c) ||u||_inf |grad eta| wherever
    // eta is strictly between 0 and 1 at both ends of a step.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = t[i + 1] - t[i];
        const double rate = 0.5 * (speed[i] + speed[i + 1]) / o.c;
        for (double d : dist) {
            const double a = eta(i, d), b = eta(i + 1, d);
            if (a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= 1.0) continue;
            rep.tax_violation = std::max(rep.tax_violation, (b - a) / h + rate * slope);
        }
    }
    return rep;
}

std::vector<double> vorticity_residual(const Trajectory& traj) {
    const std::size_t n = traj.size();
    const auto& g = traj.grid;
    std::vector<VectorField> w;
    for (const auto& u : traj.u) w.push_back(curl(u));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto st = time_stencil(traj.times, i);
        VectorField r = st.w[0] * w[st.idx[0]];
        r.axpy(st.w[1], w[st.idx[1]]);
        r.axpy(st.w[2], w[st.idx[2]]);
        const auto& u = traj.u[i];
        const auto& om = w[i];
        for (int a = 0; a < 3; ++a)
            for (int j = 0; j < 3; ++j) {
                r.comp[a] += product(u[j], derivative(om[a], j));
                r.comp[a] -= product(om[j], derivative(u[a], j));
            }
        r -= laplacian(om);
        if (traj.eps > 0.0) r.axpy(traj.eps, laplacian(laplacian(om)));
        if (!traj.f.empty()) r -= curl(traj.f.at(traj.times[i], g));
        out[i] = l2_norm(r);
    }
    return out;
}

}  // namespace nslab

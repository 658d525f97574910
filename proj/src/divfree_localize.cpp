#include "divfree_localize.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace nslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 mul(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// g(t) = exp(-1/t) and its first two derivatives.
double glue(double t) { return t > 0 ? std::exp(-1 / t) : 0.0; }
double glue_d(double t) { return t > 0 ? glue(t) / (t * t) : 0.0; }
double glue_dd(double t) { return t > 0 ? glue(t) * (1 / (t * t * t * t) - 2 / (t * t * t)) : 0.0; }

// Smooth step S(y) = g(y) / (g(y) + g(1 - y)) and derivatives.
struct Step {
    double s, d, dd;
};

Step smooth_step(double y) {
    if (y <= 0) return {0, 0, 0};
    if (y >= 1) return {1, 0, 0};
    const double G1 = glue(y), G2 = glue(1 - y);
    const double a = glue_d(y), b = glue_d(1 - y);
    const double a2 = glue_dd(y), b2 = glue_dd(1 - y);
    const double sum = G1 + G2;
    const double N = a * G2 + b * G1;
    const double Np = a2 * G2 - b2 * G1;
    return {G1 / sum, N / (sum * sum), Np / (sum * sum) - 2 * N * (a - b) / (sum * sum * sum)};
}

double ll1(int l) { return double(l) * (l + 1); }

int degree_of(int lm) { return int(std::sqrt(double(lm))); }

}  // namespace

void AnnulusSpec::validate() const {
    if (!(R1 > 0 && R1 < R2 && R2 < R3 && R3 < R4)) throw std::invalid_argument("annulus radii must satisfy 0 < R1 < R2 < R3 < R4");
}

double AnnulusSpec::eta(double r) const { return 1 - smooth_step((r - R2) / (R3 - R2)).s; }
double AnnulusSpec::eta_d(double r) const { return -smooth_step((r - R2) / (R3 - R2)).d / (R3 - R2); }
double AnnulusSpec::eta_dd(double r) const {
    const double w = R3 - R2;
    return -smooth_step((r - R2) / w).dd / (w * w);
}

double flux_through_sphere(const FieldFn& u, const Vec3& x0, double r, const SphereGrid& g) {
    double s = 0.0;
    for (int i = 0; i < g.nlat; ++i) {
        double row = 0.0;
        for (int k = 0; k < g.nlon; ++k) {
            const Vec3 n = g.direction(i, k);
            row += dot(u(add(x0, mul(r, n))), n);
        }
        s += g.weight[i] * row;
    }
    return s * g.dphi() * r * r;
}

double flux_check(const FieldFn& u, const AnnulusSpec& spec, double r, int lmax) {
    spec.validate();
    if (!(r > spec.R1 && r < spec.R4)) throw std::out_of_range("flux radius outside the shell");
    return flux_through_sphere(u, spec.x0, r, SphereGrid::make(lmax));
}

SphericalField SphericalField::analyse(const FieldFn& u, const AnnulusSpec& spec, const LocalizeOptions& opt) {
    spec.validate();
    if (opt.lmax < 1) throw std::invalid_argument("lmax must be at least 1");
    SphericalField f;
    f.spec = spec;
    f.options = opt;
    f.lmax = opt.lmax;
    f.radial = Chebyshev::make(opt.nrad, spec.R1, spec.R4);
    f.grid = SphereGrid::make(opt.lmax);
    const auto& g = f.grid;
    const int nr = f.radial.size();
    f.a.resize(nr);
    f.S.resize(nr);
    f.T.resize(nr);
    double total = 0.0, missed = 0.0;
    for (int j = 0; j < nr; ++j) {
        const double r = f.radial.x[j];
        std::vector<double> ur(g.size()), ut(g.size()), up(g.size());
        for (int i = 0; i < g.nlat; ++i)
            for (int k = 0; k < g.nlon; ++k) {
                const Vec3 n = g.direction(i, k);
                const Vec3 v = u(add(spec.x0, mul(r, n)));
                const std::size_t p = std::size_t(i) * g.nlon + k;
                ur[p] = dot(v, n);
                ut[p] = dot(v, g.e_theta(i, k));
                up[p] = dot(v, g.e_phi(i, k));
                f.scale = std::max(f.scale, norm(v));
            }
        f.a[j] = sh_analyse(g, ur, f.lmax);
        vsh_analyse(g, ut, up, f.lmax, f.S[j], f.T[j]);
        const auto rr = sh_synthesise(g, f.a[j], f.lmax);
        std::vector<double> rt, rp;
        vsh_synthesise(g, f.S[j], f.T[j], f.lmax, rt, rp);
        const double wr = f.radial.quad[j] * r * r;
        for (int i = 0; i < g.nlat; ++i)
            for (int k = 0; k < g.nlon; ++k) {
                const std::size_t p = std::size_t(i) * g.nlon + k;
                const double w = wr * g.weight[i];
                total += w * (ur[p] * ur[p] + ut[p] * ut[p] + up[p] * up[p]);
                const double dr = ur[p] - rr[p], dt = ut[p] - rt[p], dp = up[p] - rp[p];
                missed += w * (dr * dr + dt * dt + dp * dp);
            }
    }
    f.tail = total > 0 ? missed / total : 0.0;
    if (f.scale == 0.0) return f;
    const int n = sh_count(f.lmax);
    for (int j = 0; j < nr; ++j) f.max_flux = std::max(f.max_flux, std::abs(f.a[j][0]) * std::sqrt(4 * kPi) / f.scale);
    for (int lm = 1; lm < n; ++lm) {
        std::vector<double> r2a(nr);
        for (int j = 0; j < nr; ++j) r2a[j] = f.radial.x[j] * f.radial.x[j] * f.a[j][lm];
        const auto D = f.radial.derivative(r2a);
        const double L = ll1(degree_of(lm));
        for (int j = 0; j < nr; ++j)
            f.max_div = std::max(f.max_div, std::abs(f.S[j][lm] - D[j] / (f.radial.x[j] * L)) / f.scale);
    }
    return f;
}

LocalizedField localize_divfree(const SphericalField& u) {
    const auto& opt = u.options;
    if (u.tail > opt.tail_tol)
        throw ResolutionError("angular resolution too low: energy fraction " + std::to_string(u.tail) + " beyond lmax");
    if (u.max_flux > opt.flux_tol)
        throw std::domain_error("field has nonzero flux through spheres around the centre");
    if (u.max_div > opt.div_tol) throw std::domain_error("field is not divergence-free on the shell");
    LocalizedField v;
    v.spec = u.spec;
    v.radial = u.radial;
    v.lmax = u.lmax;
    v.scale = u.scale;
    const int n = sh_count(u.lmax), nr = u.radial.size();
    v.a.assign(n, std::vector<double>(nr));
    v.T.assign(n, std::vector<double>(nr));
    v.D.assign(n, std::vector<double>(nr));
    for (int lm = 0; lm < n; ++lm) {
        std::vector<double> r2a(nr);
        for (int j = 0; j < nr; ++j) {
            v.a[lm][j] = u.a[j][lm];
            v.T[lm][j] = u.T[j][lm];
            r2a[j] = u.radial.x[j] * u.radial.x[j] * u.a[j][lm];
        }
        v.D[lm] = u.radial.derivative(r2a);
    }
    return v;
}

LocalizedField localize_divfree(const FieldFn& u, const AnnulusSpec& spec, const LocalizeOptions& opt) {
    return localize_divfree(SphericalField::analyse(u, spec, opt));
}

Vec3 LocalizedField::evaluate(const Vec3& x) const {
    const Vec3 d = sub(x, spec.x0);
    const double r = norm(d);
    if (r < spec.R1 * 0.99) throw std::out_of_range("point inside the inner sphere of the shell");
    if (r >= spec.R3) return {0.0, 0.0, 0.0};
    double theta = std::acos(std::clamp(d[2] / r, -1.0, 1.0));
    if (std::sin(theta) < 1e-12) theta = theta < 1 ? 1e-9 : kPi - 1e-9;
    const double phi = std::atan2(d[1], d[0]);
    std::vector<double> Y, Yt, Yp;
    sh_basis(lmax, theta, phi, Y, Yt, Yp);
    const auto w = radial.interpolation_weights(r);
    const double e = spec.eta(r), ed = spec.eta_d(r);
    auto interp = [&](const std::vector<double>& prof) {
        double s = 0.0;
        for (std::size_t j = 0; j < prof.size(); ++j) s += w[j] * prof[j];
        return s;
    };
    double ur = 0.0, ut = 0.0, up = 0.0;
    const int n = sh_count(lmax);
    for (int lm = 0; lm < n; ++lm) {
        const double al = interp(a[lm]);
        ur += e * al * Y[lm];
        if (lm == 0) continue;
        const double s = (e * interp(D[lm]) + ed * r * r * al) / (r * ll1(degree_of(lm)));
        const double t = e * interp(T[lm]);
        ut += s * Yt[lm] - t * Yp[lm];
        up += s * Yp[lm] + t * Yt[lm];
    }
    const double st = std::sin(theta), ct = std::cos(theta), sp = std::sin(phi), cp = std::cos(phi);
    const Vec3 n_hat{st * cp, st * sp, ct}, e_t{ct * cp, ct * sp, -st}, e_p{-sp, cp, 0.0};
    return add(add(mul(ur, n_hat), mul(ut, e_t)), mul(up, e_p));
}

ShellNorms localized_norms(const LocalizedField& v) {
    const int lmax = v.lmax, nr = v.radial.size();
    const auto g = SphereGrid::make(lmax + 2);
    const int lc = lmax + 1;
    const int nc = sh_count(lc);
    // Cartesian coefficients of the smooth parts A (eta weight) and B (eta' weight).
    std::vector<std::vector<double>> A(3 * nc, std::vector<double>(nr)), B(3 * nc, std::vector<double>(nr));
    const int n = sh_count(lmax);
    for (int j = 0; j < nr; ++j) {
        const double r = v.radial.x[j];
        std::vector<double> a(n), sa(n, 0.0), ta(n, 0.0), sb(n, 0.0), zero(n, 0.0);
        for (int lm = 0; lm < n; ++lm) {
            a[lm] = v.a[lm][j];
            if (lm == 0) continue;
            const double L = ll1(degree_of(lm));
            sa[lm] = v.D[lm][j] / (r * L);
            ta[lm] = v.T[lm][j];
            sb[lm] = r * v.a[lm][j] / L;
        }
        const auto ar = sh_synthesise(g, a, lmax);
        std::vector<double> at, ap, bt, bp;
        vsh_synthesise(g, sa, ta, lmax, at, ap);
        vsh_synthesise(g, sb, zero, lmax, bt, bp);
        std::array<std::vector<double>, 3> ca, cb;
        for (int c = 0; c < 3; ++c) {
            ca[c].resize(g.size());
            cb[c].resize(g.size());
        }
        for (int i = 0; i < g.nlat; ++i)
            for (int k = 0; k < g.nlon; ++k) {
                const std::size_t p = std::size_t(i) * g.nlon + k;
                const Vec3 nh = g.direction(i, k), et = g.e_theta(i, k), ep = g.e_phi(i, k);
                for (int c = 0; c < 3; ++c) {
                    ca[c][p] = ar[p] * nh[c] + at[p] * et[c] + ap[p] * ep[c];
                    cb[c][p] = bt[p] * et[c] + bp[p] * ep[c];
                }
            }
        for (int c = 0; c < 3; ++c) {
            const auto pa = sh_analyse(g, ca[c], lc);
            const auto pb = sh_analyse(g, cb[c], lc);
            for (int lm = 0; lm < nc; ++lm) {
                A[c * nc + lm][j] = pa[lm];
                B[c * nc + lm][j] = pb[lm];
            }
        }
    }
    // The smooth profiles are interpolated onto a rule that resolves eta.
    const auto rule = RadialRule::cutoff(v.spec, 33);
    const std::size_t nq = rule.r.size();
    std::vector<std::vector<double>> interp(nq);
    for (std::size_t k = 0; k < nq; ++k) interp[k] = v.radial.interpolation_weights(rule.r[k]);
    auto at = [&](const std::vector<double>& prof, std::size_t k) {
        double s = 0.0;
        for (int j = 0; j < nr; ++j) s += interp[k][j] * prof[j];
        return s;
    };
    double l2 = 0.0, grad = 0.0;
    for (int q = 0; q < 3 * nc; ++q) {
        const auto dA = v.radial.derivative(A[q]);
        const auto dB = v.radial.derivative(B[q]);
        const double L = ll1(degree_of(q % nc));
        for (std::size_t k = 0; k < nq; ++k) {
            const double r = rule.r[k];
            const double e = v.spec.eta(r), ed = v.spec.eta_d(r), edd = v.spec.eta_dd(r);
            const double a = at(A[q], k), b = at(B[q], k);
            const double val = e * a + ed * b;
            const double dr = ed * a + e * at(dA, k) + edd * b + ed * at(dB, k);
            l2 += rule.w[k] * val * val;
            grad += rule.w[k] * (dr * dr + L * val * val / (r * r));
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + grad), 0.0};
}

RadialRule RadialRule::shell(const AnnulusSpec& spec, int n) {
    const auto c = Chebyshev::make(n, spec.R1, spec.R4);
    RadialRule q;
    for (int j = 0; j < c.size(); ++j) {
        q.r.push_back(c.x[j]);
        q.w.push_back(c.quad[j] * c.x[j] * c.x[j]);
    }
    return q;
}

RadialRule RadialRule::cutoff(const AnnulusSpec& spec, int n) {
    RadialRule q;
    auto piece = [&](double a, double b) {
        const auto c = Chebyshev::make(n, a, b);
        for (int j = 0; j < c.size(); ++j) {
            q.r.push_back(c.x[j]);
            q.w.push_back(c.quad[j] * c.x[j] * c.x[j]);
        }
    };
    piece(spec.R1, spec.R2);
    const double w = (spec.R3 - spec.R2) / 4;
    for (int p = 0; p < 4; ++p) piece(spec.R2 + p * w, spec.R2 + (p + 1) * w);
    return q;
}

ShellNorms field_norms(const FieldFn& u, const AnnulusSpec& spec, int lmax, int nrad, double h) {
    spec.validate();
    return field_norms(u, spec, RadialRule::shell(spec, nrad), lmax, h);
}

ShellNorms field_norms(const FieldFn& u, const AnnulusSpec& spec, const RadialRule& rule, int lmax, double h) {
    const auto g = SphereGrid::make(lmax);
    const double c1[4] = {-1, 8, -8, 1}, o1[4] = {2, 1, -1, -2};
    double l2 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t j = 0; j < rule.r.size(); ++j) {
        const double r = rule.r[j];
        for (int i = 0; i < g.nlat; ++i)
            for (int k = 0; k < g.nlon; ++k) {
                const Vec3 x = add(spec.x0, mul(r, g.direction(i, k)));
                const Vec3 u0 = u(x);
                double s0 = dot(u0, u0), s1 = 0.0, s2 = 0.0;
                for (int a = 0; a < 3; ++a) {
                    Vec3 samples[4];
                    for (int q = 0; q < 4; ++q) {
                        Vec3 y = x;
                        y[a] += o1[q] * h;
                        samples[q] = u(y);
                    }
                    for (int c = 0; c < 3; ++c) {
                        double d1 = 0.0;
                        for (int q = 0; q < 4; ++q) d1 += c1[q] * samples[q][c];
                        d1 /= 12 * h;
                        const double d2 = (-samples[0][c] + 16 * samples[1][c] - 30 * u0[c] + 16 * samples[2][c] -
                                           samples[3][c]) / (12 * h * h);
                        s1 += d1 * d1;
                        s2 += d2 * d2;
                    }
                    for (int b = a + 1; b < 3; ++b) {
                        Vec3 m{0, 0, 0};
                        for (int p = 0; p < 4; ++p)
                            for (int q = 0; q < 4; ++q) {
                                Vec3 y = x;
                                y[a] += o1[p] * h;
                                y[b] += o1[q] * h;
                                m = add(m, mul(c1[p] * c1[q], u(y)));
                            }
                        m = mul(1 / (144 * h * h), m);
                        s2 += 2 * dot(m, m);
                    }
                }
                const double w = rule.w[j] * g.weight[i] * g.dphi();
                l2 += w * s0;
                g1 += w * s1;
                g2 += w * s2;
            }
    }
    return {std::sqrt(l2), std::sqrt(l2 + g1), std::sqrt(l2 + g1 + g2)};
}

double fd_divergence(const FieldFn& u, const Vec3& x, double h) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        Vec3 p1 = x, m1 = x, p2 = x, m2 = x;
        p1[a] += h;
        m1[a] -= h;
        p2[a] += 2 * h;
        m2[a] -= 2 * h;
        s += (8 * (u(p1)[a] - u(m1)[a]) - (u(p2)[a] - u(m2)[a])) / (12 * h);
    }
    return s;
}

LocalizeCheck check_localized(const FieldFn& u, const LocalizedField& v, int npoints, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud;
    const auto& s = v.spec;
    const double h = 1e-3, margin = 2.5 * h;
    auto point = [&](double lo, double hi) {
        Vec3 n{nd(rng), nd(rng), nd(rng)};
        n = mul(1 / norm(n), n);
        return add(s.x0, mul(lo + (hi - lo) * ud(rng), n));
    };
    const FieldFn vf = [&](const Vec3& x) { return v.evaluate(x); };
    LocalizeCheck out;
    const double scale = v.scale > 0 ? v.scale : 1.0;
    for (int i = 0; i < npoints; ++i) {
        const Vec3 x = point(s.R1, s.R2);
        out.agreement = std::max(out.agreement, norm(sub(v.evaluate(x), u(x))) / scale);
        const Vec3 y = point(s.R3, s.R4);
        out.vanishing = std::max(out.vanishing, norm(v.evaluate(y)) / scale);
        const Vec3 z = point(s.R1 + margin, s.R4);
        out.divergence = std::max(out.divergence, std::abs(fd_divergence(vf, z, h)) / scale);
    }
    return out;
}

const std::vector<std::string>& suite_field_names() {
    static const std::vector<std::string> names{"constant", "rotation", "abc", "curl-gaussian", "potential"};
    return names;
}

FieldFn suite_field(const std::string& name) {
    if (name == "constant") return [](const Vec3&) { return Vec3{1.0, -0.5, 0.25}; };
    if (name == "rotation") return [](const Vec3& x) { return cross(Vec3{0.3, -0.2, 1.0}, x); };
    if (name == "abc")
        return [](const Vec3& x) {
            const double A = 1.0, B = 0.7, C = 0.4;
            return Vec3{A * std::sin(x[2]) + C * std::cos(x[1]), B * std::sin(x[0]) + A * std::cos(x[2]),
                        C * std::sin(x[1]) + B * std::cos(x[0])};
        };
    if (name == "curl-gaussian")
        return [](const Vec3& x) {
            const Vec3 c{0.3, -0.2, 0.1}, a{0.5, 1.0, -0.7};
            const Vec3 d = sub(x, c);
            const double gauss = std::exp(-dot(d, d));
            return cross(mul(-2 * gauss, d), a);
        };
    if (name == "potential")
        return [](const Vec3& x) {
            const Vec3 p{6 * 0.48, 6 * 0.6, 6 * 0.64};
            const Vec3 d = sub(x, p);
            const double r = norm(d);
            return mul(-1 / (r * r * r), d);
        };
    throw std::invalid_argument("unknown suite field: " + name);
}

FieldFn trilinear_sampler(const VectorField& u) {
    const SpectralGrid g = u.grid();
    auto phys = std::make_shared<std::array<std::vector<double>, 3>>(u.to_physical());
    return [g, phys](const Vec3& x) {
        const int N = g.N;
        const double h = g.L / N;
        int i0[3];
        double t[3];
        for (int a = 0; a < 3; ++a) {
            const double s = x[a] / h;
            const double fl = std::floor(s);
            t[a] = s - fl;
            i0[a] = int(((long long)fl % N + N) % N);
        }
        Vec3 out{0, 0, 0};
        for (int c = 0; c < 8; ++c) {
            const int b1 = c & 1, b2 = (c >> 1) & 1, b3 = (c >> 2) & 1;
            const double w = (b1 ? t[0] : 1 - t[0]) * (b2 ? t[1] : 1 - t[1]) * (b3 ? t[2] : 1 - t[2]);
            const std::size_t idx = (std::size_t((i0[2] + b3) % N) * N + (i0[1] + b2) % N) * N + (i0[0] + b1) % N;
            for (int a = 0; a < 3; ++a) out[a] += w * (*phys)[a][idx];
        }
        return out;
    };
}

VectorField resample_localized(const LocalizedField& v, const SpectralGrid& g, const FieldFn& inner) {
    return sample_vector(g, [&](const Vec3& x) {
        Vec3 d = sub(x, v.spec.x0);
        for (auto& c : d) c -= g.L * std::round(c / g.L);
        const Vec3 y = add(v.spec.x0, d);
        return norm(d) < v.spec.R1 ? inner(y) : v.evaluate(y);
    });
}

}  // namespace nslab

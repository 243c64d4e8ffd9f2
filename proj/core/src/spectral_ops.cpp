#include "snslab/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "fft.hpp"
#include "snslab/errors.hpp"
#include "snslab/rng.hpp"

namespace snslab {
namespace {

constexpr double kArea = 4.0 * std::numbers::pi * std::numbers::pi;

// Weighted Parseval sum over the half plane: sum_k |k|^(2p) |u_k|^2 * area.
double weighted_energy(const SpectralField& u, int power) {
    double total = 0.0;
    for (int ix = 0; ix < u.n(); ++ix) {
        const double kx = u.kx(ix);
        for (int iky = 0; iky < u.nky(); ++iky) {
            const double k2 = kx * kx + static_cast<double>(iky) * iky;
            const double kp = power == 0 ? 1.0 : (power == 1 ? k2 : k2 * k2);
            const double w = (iky == 0 ? 1.0 : 2.0) * kp;
            total += w * (std::norm(u.at(0, ix, iky)) + std::norm(u.at(1, ix, iky)));
        }
    }
    return kArea * total;
}

bool in_band(const SpectralField& u, int ix, int iky, int cutoff) {
    return std::abs(u.kx(ix)) <= cutoff && iky <= cutoff;
}

struct Scratch {
    std::vector<double> a, b, c, d, e, f;
    std::vector<cplx> s1, s2, s3;
    void resize(int n) {
        const std::size_t nr = static_cast<std::size_t>(n) * n;
        const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
        for (auto* v : {&a, &b, &c, &d, &e, &f}) v->resize(nr);
        for (auto* v : {&s1, &s2, &s3}) v->resize(nc);
    }
};

Scratch& scratch(int n) {
    thread_local Scratch s;
    s.resize(n);
    return s;
}

// i k c without the NaN-handling path of generic complex multiplication.
inline cplx times_ik(double k, cplx c) { return {-k * c.imag(), k * c.real()}; }

// Masked copy of one component, optionally multiplied by i*k_dir.
void band_copy(const SpectralField& u, int comp, int derivative_dir, std::vector<cplx>& out) {
    const int cutoff = dealias_cutoff(u.n());
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iky = 0; iky < u.nky(); ++iky) {
            const std::size_t idx = static_cast<std::size_t>(ix) * u.nky() + iky;
            if (!in_band(u, ix, iky, cutoff)) {
                out[idx] = 0.0;
                continue;
            }
            const cplx c = u.at(comp, ix, iky);
            if (derivative_dir < 0) {
                out[idx] = c;
            } else {
                const double k = derivative_dir == 0 ? u.kx(ix) : static_cast<double>(iky);
                out[idx] = times_ik(k, c);
            }
        }
    }
}

// Leray projection of an in-band raw field, everything outside the band zeroed.
void project_in_band(SpectralField& w) {
    dealias(w);
    w = leray_project(std::move(w));
}

}  // namespace

SpectralField leray_project(SpectralField u) {
    const int n = u.n();
    for (int ix = 0; ix < n; ++ix) {
        const double kx = u.kx(ix);
        for (int iky = 0; iky < u.nky(); ++iky) {
            if (u.nyquist(ix, iky) || (ix == 0 && iky == 0)) {
                u.at(0, ix, iky) = 0.0;
                u.at(1, ix, iky) = 0.0;
                continue;
            }
            const double ky = iky;
            const double k2 = kx * kx + ky * ky;
            const cplx a = u.at(0, ix, iky);
            const cplx b = u.at(1, ix, iky);
            const cplx dot = (kx * a + ky * b) / k2;
            u.at(0, ix, iky) = a - kx * dot;
            u.at(1, ix, iky) = b - ky * dot;
        }
    }
    enforce_reality(u);
    return u;
}

double inner_H(const SpectralField& u, const SpectralField& w) {
    u.require_same_grid(w, "inner_H");
    double total = 0.0;
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iky = 0; iky < u.nky(); ++iky) {
            const double weight = iky == 0 ? 1.0 : 2.0;
            total += weight * (std::real(u.at(0, ix, iky) * std::conj(w.at(0, ix, iky))) +
                               std::real(u.at(1, ix, iky) * std::conj(w.at(1, ix, iky))));
        }
    }
    return kArea * total;
}

double norm_H_sq(const SpectralField& u) { return weighted_energy(u, 0); }
double norm_V_sq(const SpectralField& u) { return weighted_energy(u, 1); }
double norm_DA_sq(const SpectralField& u) { return weighted_energy(u, 2); }
double norm_H(const SpectralField& u) { return std::sqrt(norm_H_sq(u)); }
double norm_V(const SpectralField& u) { return std::sqrt(norm_V_sq(u)); }
double norm_DA(const SpectralField& u) { return std::sqrt(norm_DA_sq(u)); }

SpectralField apply_A(const SpectralField& u) {
    SpectralField out = u;
    for (int ix = 0; ix < u.n(); ++ix) {
        const double kx = u.kx(ix);
        for (int iky = 0; iky < u.nky(); ++iky) {
            const double k2 = kx * kx + static_cast<double>(iky) * iky;
            out.at(0, ix, iky) *= k2;
            out.at(1, ix, iky) *= k2;
        }
    }
    return out;
}

int dealias_cutoff(int n) { return (n - 1) / 3; }

void dealias(SpectralField& u) {
    const int cutoff = dealias_cutoff(u.n());
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iky = 0; iky < u.nky(); ++iky) {
            if (!in_band(u, ix, iky, cutoff)) {
                u.at(0, ix, iky) = 0.0;
                u.at(1, ix, iky) = 0.0;
            }
        }
    }
}

SpectralField nonlinear_B(const SpectralField& u, const SpectralField& v) {
    u.require_same_grid(v, "nonlinear_B");
    const int n = u.n();
    Scratch& s = scratch(n);
    const std::size_t nr = static_cast<std::size_t>(n) * n;

    band_copy(u, 0, -1, s.s1);
    fft::backward(n, s.s1.data(), s.a.data());
    band_copy(u, 1, -1, s.s1);
    fft::backward(n, s.s1.data(), s.b.data());
    band_copy(v, 0, 0, s.s1);
    fft::backward(n, s.s1.data(), s.c.data());
    band_copy(v, 0, 1, s.s1);
    fft::backward(n, s.s1.data(), s.d.data());
    band_copy(v, 1, 0, s.s1);
    fft::backward(n, s.s1.data(), s.e.data());
    band_copy(v, 1, 1, s.s1);
    fft::backward(n, s.s1.data(), s.f.data());

    for (std::size_t i = 0; i < nr; ++i) {
        const double w1 = s.a[i] * s.c[i] + s.b[i] * s.d[i];
        const double w2 = s.a[i] * s.e[i] + s.b[i] * s.f[i];
        s.c[i] = w1;
        s.e[i] = w2;
    }
    SpectralField out(n);
    fft::forward(n, s.c.data(), out.component(0).data());
    fft::forward(n, s.e.data(), out.component(1).data());
    project_in_band(out);
    return out;
}

SpectralField nonlinear_B(const SpectralField& u) {
    const int n = u.n();
    Scratch& s = scratch(n);
    const std::size_t nr = static_cast<std::size_t>(n) * n;

    band_copy(u, 0, -1, s.s1);
    fft::backward(n, s.s1.data(), s.a.data());
    band_copy(u, 1, -1, s.s1);
    fft::backward(n, s.s1.data(), s.b.data());
    for (std::size_t i = 0; i < nr; ++i) {
        s.c[i] = s.a[i] * s.a[i];
        s.d[i] = s.a[i] * s.b[i];
        s.e[i] = s.b[i] * s.b[i];
    }
    fft::forward(n, s.c.data(), s.s1.data());
    fft::forward(n, s.d.data(), s.s2.data());
    fft::forward(n, s.e.data(), s.s3.data());

    SpectralField out(n);
    for (int ix = 0; ix < n; ++ix) {
        const double kx = out.kx(ix);
        for (int iky = 0; iky < out.nky(); ++iky) {
            const double ky = iky;
            const std::size_t idx = static_cast<std::size_t>(ix) * out.nky() + iky;
            out.at(0, ix, iky) = times_ik(kx, s.s1[idx]) + times_ik(ky, s.s2[idx]);
            out.at(1, ix, iky) = times_ik(kx, s.s2[idx]) + times_ik(ky, s.s3[idx]);
        }
    }
    project_in_band(out);
    return out;
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    u.require_same_grid(w, "trilinear_b");
    return inner_H(nonlinear_B(u, v), w);
}

EigenOrdering::EigenOrdering(int n) : n_(n) {
    if (n < 4 || n % 2 != 0) throw ValidationError("eigen ordering: N must be even and >= 4");
    const int nky = n / 2 + 1;
    std::vector<std::tuple<int, int, int>> entries;  // (|k|^2, kx, ky)
    for (int ky = 0; ky < n / 2; ++ky) {
        for (int kx = -n / 2 + 1; kx < n / 2; ++kx) {
            if (ky == 0 && kx <= 0) continue;
            entries.emplace_back(kx * kx + ky * ky, kx, ky);
        }
    }
    std::sort(entries.begin(), entries.end());
    rank_.assign(static_cast<std::size_t>(n) * nky, -1);
    lambdas_.reserve(entries.size());
    for (std::size_t r = 0; r < entries.size(); ++r) {
        const auto [k2, kx, ky] = entries[r];
        lambdas_.push_back(k2);
        const int ix = kx >= 0 ? kx : kx + n;
        rank_[static_cast<std::size_t>(ix) * nky + ky] = static_cast<int>(r);
        if (ky == 0) rank_[static_cast<std::size_t>(n - kx) * nky] = static_cast<int>(r);
    }
}

double EigenOrdering::lambda(int i) const {
    if (i < 1 || i > size()) throw ValidationError("eigen ordering: index out of range");
    return lambdas_[static_cast<std::size_t>(i - 1)];
}

int EigenOrdering::index_before_lambda(double target) const {
    const auto it = std::lower_bound(lambdas_.begin(), lambdas_.end(), target);
    return static_cast<int>(it - lambdas_.begin());
}

SpectralField project_P(const SpectralField& u, int i, const EigenOrdering& ord) {
    if (u.n() != ord.n()) throw ValidationError("project_P: grid mismatch");
    if (i < 0 || i > ord.size()) throw ValidationError("project_P: i out of range");
    SpectralField out = u;
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iky = 0; iky < u.nky(); ++iky) {
            const int r = ord.rank(ix, iky);
            if (r < 0 || r >= i) {
                out.at(0, ix, iky) = 0.0;
                out.at(1, ix, iky) = 0.0;
            }
        }
    }
    return out;
}

SpectralField residual_Q(const SpectralField& u, int i, const EigenOrdering& ord) {
    return u - project_P(u, i, ord);
}

namespace {

template <class F1, class F2>
SpectralField sample_physical(int n, F1&& f1, F2&& f2) {
    PhysicalField p;
    p.n = n;
    p.u1.resize(static_cast<std::size_t>(n) * n);
    p.u2.resize(p.u1.size());
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = i * h;
            const double y = j * h;
            p.u1[static_cast<std::size_t>(i) * n + j] = f1(x, y);
            p.u2[static_cast<std::size_t>(i) * n + j] = f2(x, y);
        }
    }
    return from_physical(p);
}

}  // namespace

SpectralField taylor_green(int n, double amplitude) {
    return sample_physical(
        n, [&](double x, double y) { return amplitude * std::sin(x) * std::cos(y); },
        [&](double x, double y) { return -amplitude * std::cos(x) * std::sin(y); });
}

SpectralField shear_x(int n, int k, double amplitude) {
    return sample_physical(
        n, [&](double, double y) { return amplitude * std::sin(k * y); },
        [](double, double) { return 0.0; });
}

SpectralField sin_pair(int n, int k, double amplitude) {
    return sample_physical(
        n, [&](double, double y) { return amplitude * std::sin(k * y); },
        [&](double x, double) { return amplitude * std::sin(k * x); });
}

SpectralField single_mode(int n, int kx, int ky, cplx a) {
    if (ky < 0 || (ky == 0 && kx <= 0)) throw ValidationError("single_mode: k must be in the upper half plane");
    if (std::abs(kx) >= n / 2 || ky >= n / 2) throw ValidationError("single_mode: k outside the grid");
    SpectralField u(n);
    const double kk = std::sqrt(static_cast<double>(kx * kx + ky * ky));
    const int ix = kx >= 0 ? kx : kx + n;
    u.at(0, ix, ky) = a * (-ky / kk);
    u.at(1, ix, ky) = a * (kx / kk);
    if (ky == 0) {
        u.at(0, n - ix, 0) = std::conj(u.at(0, ix, 0));
        u.at(1, n - ix, 0) = std::conj(u.at(1, ix, 0));
    }
    return u;
}

SpectralField random_field(int n, std::uint64_t seed, std::uint64_t stream, double h_norm) {
    SpectralField u(n);
    rng::StreamCursor cursor(seed, stream);
    const int cutoff = dealias_cutoff(n);
    for (int ky = 0; ky <= cutoff; ++ky) {
        for (int kx = -cutoff; kx <= cutoff; ++kx) {
            if (ky == 0 && kx <= 0) continue;
            const double k2 = kx * kx + ky * ky;
            const double kk = std::sqrt(k2);
            const double re = cursor.normal();
            const double im = cursor.normal();
            const cplx a = cplx(re, im) / (1.0 + k2);
            const int ix = kx >= 0 ? kx : kx + n;
            u.at(0, ix, ky) = a * (-ky / kk);
            u.at(1, ix, ky) = a * (kx / kk);
        }
    }
    for (int ix = 1; ix < n / 2; ++ix) {
        u.at(0, n - ix, 0) = std::conj(u.at(0, ix, 0));
        u.at(1, n - ix, 0) = std::conj(u.at(1, ix, 0));
    }
    return with_norm_H(std::move(u), h_norm);
}

SpectralField with_norm_H(SpectralField u, double h_norm) {
    const double current = norm_H(u);
    if (current > 0.0) u *= h_norm / current;
    return u;
}

double grid_energy(const SpectralField& u) {
    const PhysicalField p = to_physical(u);
    double total = 0.0;
    for (std::size_t i = 0; i < p.u1.size(); ++i) total += p.u1[i] * p.u1[i] + p.u2[i] * p.u2[i];
    return total * kArea / static_cast<double>(p.u1.size());
}

double max_sym_grad_norm(const SpectralField& u, int oversample) {
    const int n = u.n();
    const int m = n * std::max(1, oversample);
    const int mky = m / 2 + 1;
    const std::size_t nc = static_cast<std::size_t>(m) * mky;
    const std::size_t nr = static_cast<std::size_t>(m) * m;

    // Zero-padded gradient components: d_j u_i.
    std::vector<std::vector<double>> grad(4, std::vector<double>(nr));
    std::vector<cplx> padded(nc);
    for (int comp = 0; comp < 2; ++comp) {
        for (int dir = 0; dir < 2; ++dir) {
            std::fill(padded.begin(), padded.end(), cplx(0.0, 0.0));
            for (int ix = 0; ix < n; ++ix) {
                const int kx = u.kx(ix);
                if (ix == n / 2) continue;
                const int jx = kx >= 0 ? kx : kx + m;
                for (int iky = 0; iky < n / 2; ++iky) {
                    const double k = dir == 0 ? kx : iky;
                    padded[static_cast<std::size_t>(jx) * mky + iky] = cplx(0.0, k) * u.at(comp, ix, iky);
                }
            }
            fft::backward(m, padded.data(), grad[static_cast<std::size_t>(2 * comp + dir)].data());
        }
    }
    double worst = 0.0;
    for (std::size_t p = 0; p < nr; ++p) {
        const double a = grad[0][p];                       // d1 u1
        const double off = 0.5 * (grad[1][p] + grad[2][p]);  // (d2 u1 + d1 u2) / 2
        const double d = grad[3][p];                       // d2 u2
        const double mean = 0.5 * (a + d);
        const double radius = std::hypot(0.5 * (a - d), off);
        worst = std::max(worst, std::abs(mean) + radius);
    }
    return worst;
}

double b1_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    const double denom = std::sqrt(norm_H(u) * norm_V(u)) * norm_V(v) * std::sqrt(norm_H(w) * norm_V(w));
    return denom > 0.0 ? std::abs(trilinear_b(u, v, w)) / denom : 0.0;
}

double b2_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    const double denom = std::sqrt(norm_H(u) * norm_V(u)) * std::sqrt(norm_V(v) * norm_DA(v)) * norm_H(w);
    return denom > 0.0 ? std::abs(trilinear_b(u, v, w)) / denom : 0.0;
}

}  // namespace snslab

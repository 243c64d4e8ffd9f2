#include "snslab/radii.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "snslab/errors.hpp"

namespace snslab {
namespace {

constexpr double kLn10 = 2.302585092994046;

// z on the grid points rho_n = n dt for n in [first, 0], with I(rho) = int_rho^0 z
// and J(rho) = int_rho^0 |z| accumulated backwards from 0.
struct BackwardGrid {
    double dt = 0.0;
    std::int64_t first = 0;
    std::vector<double> rho, z, I, J;  // index i <-> n = first + i

    explicit BackwardGrid(const noise::OUPath& path) : dt(path.dt()), first(path.first_index()) {
        if (path.first_index() > 0 || path.last_index() < 0) {
            throw PathCoverageError("radii: noise path must cover rho = 0");
        }
        const std::size_t count = static_cast<std::size_t>(-first) + 1;
        rho.resize(count);
        z.resize(count);
        I.assign(count, 0.0);
        J.assign(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            const std::int64_t n = first + static_cast<std::int64_t>(i);
            rho[i] = path.time_at(n);
            z[i] = path.at_index(n);
        }
        for (std::size_t i = count - 1; i > 0; --i) {
            I[i - 1] = I[i] + 0.5 * dt * (z[i] + z[i - 1]);
            J[i - 1] = J[i] + 0.5 * dt * (std::abs(z[i]) + std::abs(z[i - 1]));
        }
    }

    std::size_t size() const { return rho.size(); }
    std::size_t zero() const { return size() - 1; }
    // Index of rho = -t (t >= 0, on the grid).
    std::size_t index_of(double t) const {
        const auto k = static_cast<std::int64_t>(std::llround(t / dt));
        if (k > -first) throw PathCoverageError("radii: noise path too short for the requested window");
        return zero() - static_cast<std::size_t>(k);
    }
};

struct Truncation {
    std::size_t start = 0;  // first index used
    double L = 0.0;
    bool tail_ok = false;
};

// L: beyond -L the exponent stays `digits` decades below its maximum over the window.
Truncation choose_truncation(const BackwardGrid& g, const std::vector<double>& exponent, double digits) {
    const double gmax = *std::max_element(exponent.begin(), exponent.end());
    const double threshold = gmax - digits * kLn10;
    std::size_t last_high = g.zero();
    for (std::size_t i = 0; i < exponent.size(); ++i) {
        if (exponent[i] >= threshold) {
            last_high = i;
            break;
        }
    }
    Truncation t;
    const double depth = -g.rho[last_high] + 1.0;
    const double window = -g.rho.front();
    t.L = std::min(depth, window);
    t.start = g.index_of(t.L);
    t.tail_ok = window - t.L >= std::max(5.0, 0.25 * t.L);
    return t;
}

std::vector<double> s_grid(double tau, const RadiusOptions& opt) {
    std::vector<double> s(static_cast<std::size_t>(opt.j_max) + 1);
    for (int j = 0; j <= opt.j_max; ++j) s[static_cast<std::size_t>(j)] = tau - j * opt.ds;
    return s;
}

// sup over s of the trapezoid sum of weight[i] * |f(rho_i + s)|^2 for i in [start, zero].
double sup_forcing_integral(const BackwardGrid& g, std::size_t start, const std::vector<double>& weight,
                            const Forcing& f, const std::vector<double>& ss) {
    if (f.is_zero()) return 0.0;
    double best = 0.0;
    for (double s : ss) {
        double total = 0.0;
        for (std::size_t i = start; i <= g.zero(); ++i) {
            const double w = (i == start || i == g.zero()) ? 0.5 : 1.0;
            total += w * weight[i] * f.norm_sq_at(g.rho[i] + s);
        }
        best = std::max(best, total * g.dt);
    }
    return best;
}

double sup_abs_z(const BackwardGrid& g, double window) {
    double best = 0.0;
    for (std::size_t i = g.index_of(window); i <= g.zero(); ++i) best = std::max(best, std::abs(g.z[i]));
    return best;
}

double sup_z(const BackwardGrid& g, double window) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = g.index_of(window); i <= g.zero(); ++i) best = std::max(best, g.z[i]);
    return best;
}

void require_params(double nu, double sigma, double lambda1) {
    if (!(nu > 0.0) || !(sigma > 0.0) || !(lambda1 > 0.0)) {
        throw ValidationError("radii: nu, sigma and lambda1 must be positive");
    }
}

}  // namespace

LogValue LogValue::of(double x) {
    if (x < 0.0) throw ValidationError("LogValue: negative value");
    return LogValue{std::log10(x)};
}

LogValue LogValue::from_log(double natural_log) { return LogValue{natural_log / kLn10}; }

double LogValue::value() const { return std::pow(10.0, log10); }
double LogValue::natural_log() const { return log10 * kLn10; }

std::string LogValue::str() const {
    if (std::isinf(log10)) return log10 < 0 ? "0" : "inf";
    double exponent = std::floor(log10);
    double mantissa = std::pow(10.0, log10 - exponent);
    if (mantissa >= 9.9999995) {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6fe%+.0f", mantissa, exponent);
    return buf;
}

LogValue operator+(LogValue a, LogValue b) {
    if (a.log10 < b.log10) std::swap(a, b);
    if (std::isinf(b.log10)) return a;
    return LogValue{a.log10 + std::log10(1.0 + std::pow(10.0, b.log10 - a.log10))};
}

LogValue operator*(LogValue a, LogValue b) { return LogValue{a.log10 + b.log10}; }

TruncatedIntegral mult_K(double tau, const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                         double lambda1, const RadiusOptions& opt) {
    require_params(nu, sigma, lambda1);
    const BackwardGrid g(z);
    std::vector<double> exponent(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        exponent[i] = nu * lambda1 * g.rho[i] + 2.0 * std::abs(g.z[i]) + 2.0 * sigma * g.I[i];
    }
    const Truncation tr = choose_truncation(g, exponent, opt.truncation_digits);
    std::vector<double> weight(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) weight[i] = std::exp(exponent[i]);
    TruncatedIntegral out;
    out.value = sup_forcing_integral(g, tr.start, weight, f, s_grid(tau, opt));
    out.L = tr.L;
    out.tail_ok = tr.tail_ok;
    return out;
}

MultRadii radii_multiplicative(double tau, const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                               double lambda1, const RadiusOptions& opt) {
    const TruncatedIntegral k = mult_K(tau, z, f, nu, sigma, lambda1, opt);
    const BackwardGrid g(z);
    const double nl = nu * lambda1;
    const auto ss = s_grid(tau, opt);

    MultRadii r;
    r.K = k.value;
    r.L = k.L;
    r.tail_ok = k.tail_ok;
    r.radius_H = 1.0 + 2.0 / nl * r.K;

    const std::size_t i2 = g.index_of(2.0);
    const std::size_t i1 = g.index_of(1.0);
    const double int_abs_z2 = g.J[i2];
    std::vector<double> e2z(g.size()), ones(g.size(), 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) e2z[i] = std::exp(2.0 * std::abs(g.z[i]));

    const double f_weighted2 = sup_forcing_integral(g, i2, e2z, f, ss);
    const double f_plain2 = sup_forcing_integral(g, i2, ones, f, ss);
    const double f_plain1 = sup_forcing_integral(g, i1, ones, f, ss);

    r.K_tilde = std::exp(2.0 * nl) * r.radius_H * (1.0 + 2.0 * sigma * int_abs_z2) + 2.0 / nl * f_weighted2;

    const double sup_abs2 = sup_abs_z(g, 2.0);
    const double sup_abs1 = sup_abs_z(g, 1.0);
    r.K1 = 2.0 * sigma * sup_abs2 + opt.c_mult * r.K_tilde * std::exp(4.0 * sup_abs2) * r.radius_H;

    const double bracket = r.K_tilde + 2.0 / nu * std::exp(2.0 * sup_abs2) * f_plain2;
    r.K_hat = LogValue::of(bracket) * LogValue::from_log(r.K1);

    // K_hat / nu + (1/nu)[2 sigma sup z + C e^{2 nu l1} K_hat^3 sup e^{4|z|}] + (2/nu^2) sup e^{2|z|} int |f|^2
    const LogValue inv_nu = LogValue::of(1.0 / nu);
    const LogValue cubic = LogValue::of(opt.c_mult) * LogValue::from_log(2.0 * nl + 4.0 * sup_abs1) *
                           LogValue{3.0 * r.K_hat.log10} * inv_nu;
    const double linear_z = 2.0 * sigma * sup_z(g, 1.0) / nu;
    const double tail_f = 2.0 / (nu * nu) * std::exp(2.0 * sup_abs1) * f_plain1;
    LogValue total = r.K_hat * inv_nu + cubic + LogValue::of(std::max(0.0, tail_f));
    // The sup of z over [-1, 0] may be negative; it only matters when the rest is tiny.
    if (linear_z >= 0.0) {
        total = total + LogValue::of(linear_z);
    } else {
        total = LogValue::of(std::max(0.0, total.value() + linear_z));
    }
    r.K_hat1 = total;
    return r;
}

AddRadii radii_additive(double tau, const noise::OUPath& z, const Forcing& f, const AdditiveParams& p,
                        const RadiusOptions& opt) {
    require_params(p.nu, p.sigma, p.lambda1);
    const BackwardGrid g(z);
    const double nl = p.nu * p.lambda1;
    AddRadii r;
    r.C = opt.c_add >= 0.0 ? opt.c_add : p.default_C;

    std::vector<double> exponent(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) exponent[i] = nl * g.rho[i] + 4.0 * p.aleph * g.J[i];
    const Truncation tr = choose_truncation(g, exponent, opt.truncation_digits);
    r.L = tr.L;
    r.tail_ok = tr.tail_ok;

    std::vector<double> weight(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) weight[i] = std::exp(exponent[i]);
    const double forcing_part = sup_forcing_integral(g, tr.start, weight, f, s_grid(tau, opt));
    double noise_part = 0.0;
    for (std::size_t i = tr.start; i <= g.zero(); ++i) {
        const double w = (i == tr.start || i == g.zero()) ? 0.5 : 1.0;
        const double a = std::abs(g.z[i]);
        noise_part += w * weight[i] * (a * a + a * a * a);
    }
    noise_part *= g.dt;
    r.rho1 = r.C * (forcing_part + noise_part);

    const double z0 = g.z[g.zero()];
    r.R_H = 2.0 + r.rho1 + 2.0 * p.h_norm_H_sq * z0 * z0;

    const std::size_t i2 = g.index_of(2.0);
    double int_abs = g.J[i2];
    double int_poly = 0.0;
    for (std::size_t i = i2; i <= g.zero(); ++i) {
        const double w = (i == i2 || i == g.zero()) ? 0.5 : 1.0;
        const double a2 = g.z[i] * g.z[i];
        int_poly += w * (a2 + a2 * a2);
    }
    int_poly *= g.dt;
    r.rho2 = r.C * r.rho1 + r.C * r.rho1 * int_abs + r.C * int_poly;

    const double sup_abs2 = sup_abs_z(g, 2.0);
    const double z2 = sup_abs2 * sup_abs2;
    const double exponent_V = (r.rho1 + z2) * r.rho2;
    const double bracket = r.rho2 + r.C * (r.rho1 * z2 * z2 + z2 * z2 * z2 + r.rho1 + 1.0);
    r.R_V = LogValue::of(2.0 + 2.0 * p.h_norm_V_sq * z0 * z0) +
            LogValue::of(r.C) * LogValue::from_log(exponent_V) * LogValue::of(bracket);
    return r;
}

namespace {

double absorption_time(const BackwardGrid& g, double R0_sq, double t_max,
                       const std::function<double(std::size_t)>& growth) {
    if (!(R0_sq > 0.0)) return 2.0;
    const double log_r = std::log(R0_sq);
    const std::size_t deepest = g.index_of(std::min(t_max, -g.rho.front()));
    // Scan from the deepest t towards 0; the answer is just after the last violation.
    double t0 = 2.0;
    for (std::size_t i = deepest; i <= g.zero(); ++i) {
        if (growth(i) + log_r > 0.0) {
            t0 = std::max(2.0, -g.rho[i] + g.dt);
            break;
        }
    }
    return t0;
}

}  // namespace

double absorption_time_mult(const noise::OUPath& z, double nu, double sigma, double lambda1, double R0_sq,
                            double t_max) {
    const BackwardGrid g(z);
    return absorption_time(g, R0_sq, t_max, [&](std::size_t i) {
        return nu * lambda1 * g.rho[i] + 2.0 * sigma * g.I[i] + 2.0 * std::abs(g.z[i]);
    });
}

double absorption_time_add(const noise::OUPath& z, double nu, double aleph, double lambda1, double R0_sq,
                           double t_max) {
    const BackwardGrid g(z);
    return absorption_time(g, R0_sq, t_max,
                           [&](std::size_t i) { return nu * lambda1 * g.rho[i] + 4.0 * aleph * g.J[i]; });
}

std::vector<double> tempered_decay(const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                                   double lambda1, const std::vector<double>& ts, const RadiusOptions& opt) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        const noise::OUPath shifted = z.relabeled(-t);
        const TruncatedIntegral k = mult_K(-1.0, shifted, f, nu, sigma, lambda1, opt);
        out.push_back(std::exp(-nu * lambda1 / 3.0 * t) * k.value);
    }
    return out;
}

}  // namespace snslab

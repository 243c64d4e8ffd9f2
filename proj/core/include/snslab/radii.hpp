#pragma once

// Absorbing-radius formulas evaluated by quadrature on a single noise path.
// All integrals over rho in (-inf, 0] are truncated at rho = -L and use the
// trapezoidal rule on the OU grid; sups over s <= tau use a finite s grid.

#include <limits>
#include <string>
#include <vector>

#include "snslab/forcing.hpp"
#include "snslab/ou_noise.hpp"

namespace snslab {

/// A positive number stored as log10, for radii that overflow a double.
struct LogValue {
    double log10 = -std::numeric_limits<double>::infinity();

    static LogValue of(double x);
    static LogValue from_log(double natural_log);
    double value() const;  // may be +inf
    double natural_log() const;
    /// Scientific notation with a 6-digit mantissa, e.g. "3.141593e+1234".
    std::string str() const;
};

LogValue operator+(LogValue a, LogValue b);
LogValue operator*(LogValue a, LogValue b);

struct RadiusOptions {
    double ds = 0.25;          // spacing of the s grid for sup_{s <= tau}
    int j_max = 56;            // s in {tau, ..., tau - j_max ds}; e^{-j_max ds} < 1e-6
    double truncation_digits = 8.0;  // integrand below max * 10^-digits beyond -L
    double c_mult = 1.0;       // constant C of the V and D(A) bounds
    double c_add = -1.0;       // constant C of the additive radii (< 0: default)
};

struct TruncatedIntegral {
    double value = 0.0;
    double L = 0.0;        // truncation point rho = -L
    bool tail_ok = false;  // the path reaches far enough past -L to trust the tail bound
};

/// K(tau, omega) = sup_{s <= tau} int_{-inf}^0 e^{nu l1 rho + 2|z(rho)| + 2 sigma int_rho^0 z}
///                 |f(rho + s)|^2 d rho
TruncatedIntegral mult_K(double tau, const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                         double lambda1, const RadiusOptions& opt = {});

struct MultRadii {
    double K = 0.0;
    double radius_H = 0.0;  // 1 + 2 K / (nu l1), bound on |v(tau)|_H^2
    double K_tilde = 0.0;
    double K1 = 0.0;
    LogValue K_hat;   // bound on |v|_V^2
    LogValue K_hat1;  // bound on int_{s-1}^{s} |A v|^2
    double L = 0.0;
    bool tail_ok = false;
};

MultRadii radii_multiplicative(double tau, const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                               double lambda1, const RadiusOptions& opt = {});

struct AddRadii {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double R_H = 0.0;   // bound on |u|_H^2
    LogValue R_V;       // bound on |u|_V^2
    double C = 0.0;     // constant actually used
    double L = 0.0;
    bool tail_ok = false;
};

struct AdditiveParams {
    double nu = 1.0;
    double sigma = 1.0;
    double lambda1 = 1.0;
    double aleph = 0.0;
    double h_norm_H_sq = 0.0;
    double h_norm_V_sq = 0.0;
    double default_C = 1.0;  // used when RadiusOptions::c_add < 0
};

AddRadii radii_additive(double tau, const noise::OUPath& z, const Forcing& f, const AdditiveParams& p,
                        const RadiusOptions& opt = {});

/// Smallest t0 >= 2 such that e^{growth(t)} R0_sq <= 1 for every grid t in
/// [t0, t_max], with growth(t) = -nu l1 t + 2 sigma int_{-t}^0 z + 2|z(-t)|
/// (multiplicative: the v-ball of an H-ball of radius^2 R0_sq in u).
double absorption_time_mult(const noise::OUPath& z, double nu, double sigma, double lambda1, double R0_sq,
                            double t_max);
/// Same with growth(t) = -nu l1 t + 4 aleph int_{-t}^0 |z|.
double absorption_time_add(const noise::OUPath& z, double nu, double aleph, double lambda1, double R0_sq,
                           double t_max);

/// e^{-(nu l1 / 3) t} K(-1, theta_{-t} omega) for each t.
std::vector<double> tempered_decay(const noise::OUPath& z, const Forcing& f, double nu, double sigma,
                                   double lambda1, const std::vector<double>& ts,
                                   const RadiusOptions& opt = {});

}  // namespace snslab

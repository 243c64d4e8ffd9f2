#include "snslab/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "snslab/errors.hpp"
#include "snslab/io.hpp"

namespace snslab {

bool TrajectoryRecord::all_finite() const {
    for (const auto* v : {&t, &norm_H_sq, &norm_V_sq, &norm_DA_sq, &z, &forcing_sq, &forcing_dot, &energy_residual}) {
        for (double x : *v) {
            if (!std::isfinite(x)) return false;
        }
    }
    return true;
}

namespace {

// d/dt |v|^2 by centred differences, second-order one-sided at the ends.
std::vector<double> energy_derivative(const TrajectoryRecord& tr, const char* who) {
    if (tr.stride != 1) throw ValidationError(std::string(who) + ": trajectory must be recorded with stride 1");
    const std::size_t n = tr.size();
    if (n < 3) throw ValidationError(std::string(who) + ": need at least three samples");
    const double dt = tr.dt;
    const auto& e = tr.norm_H_sq;
    std::vector<double> de(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            de[i] = (-3.0 * e[0] + 4.0 * e[1] - e[2]) / (2.0 * dt);
        } else if (i == n - 1) {
            de[i] = (3.0 * e[i] - 4.0 * e[i - 1] + e[i - 2]) / (2.0 * dt);
        } else {
            de[i] = (e[i + 1] - e[i - 1]) / (2.0 * dt);
        }
    }
    return de;
}

}  // namespace

std::vector<double> energy_residual(const TrajectoryRecord& tr, const EnergyParams& p) {
    const std::vector<double> de = energy_derivative(tr, "energy_residual");
    const auto& e = tr.norm_H_sq;
    const double nl = p.nu * p.lambda1;
    std::vector<double> r(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        r[i] = de[i] + (nl - 2.0 * p.sigma * tr.z[i]) * e[i] + 0.5 * p.nu * tr.norm_V_sq[i] -
               2.0 * std::exp(2.0 * std::abs(tr.z[i])) / nl * tr.forcing_sq[i];
    }
    return r;
}

std::vector<double> energy_identity_defect(const TrajectoryRecord& tr, const EnergyParams& p) {
    const std::vector<double> de = energy_derivative(tr, "energy_identity_defect");
    if (tr.forcing_dot.size() != tr.size()) throw ValidationError("energy_identity_defect: (f, v) not recorded");
    std::vector<double> r(tr.size());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        r[i] = de[i] + 2.0 * p.nu * tr.norm_V_sq[i] - 2.0 * p.sigma * tr.z[i] * tr.norm_H_sq[i] -
               2.0 * std::exp(-tr.z[i]) * tr.forcing_dot[i];
    }
    return r;
}

double energy_scale(const TrajectoryRecord& tr, const EnergyParams& p) {
    double scale = 0.0;
    const double nl = p.nu * p.lambda1;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        scale = std::max({scale, std::abs(nl - 2.0 * p.sigma * tr.z[i]) * tr.norm_H_sq[i],
                          0.5 * p.nu * tr.norm_V_sq[i],
                          2.0 * std::exp(2.0 * std::abs(tr.z[i])) / nl * tr.forcing_sq[i]});
    }
    return scale;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& tr) {
    os << "t,norm_H,norm_V,norm_DA,z,energy_residual\n";
    const bool with_residual = tr.energy_residual.size() == tr.size();
    for (std::size_t i = 0; i < tr.size(); ++i) {
        os << format_double(tr.t[i]) << ',' << format_double(std::sqrt(tr.norm_H_sq[i])) << ','
           << format_double(std::sqrt(tr.norm_V_sq[i])) << ','
           << format_double(std::sqrt(tr.norm_DA_sq[i])) << ',' << format_double(tr.z[i]) << ',';
        if (with_residual) os << format_double(tr.energy_residual[i]);
        os << '\n';
    }
}

}  // namespace snslab

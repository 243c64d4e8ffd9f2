#pragma once

#include <optional>
#include <ostream>
#include <vector>

namespace snslab {

/// Time series recorded along one solve. Squared norms are stored because the
/// energy balance is written in them; the CSV export prints the norms.
struct TrajectoryRecord {
    std::vector<double> t;
    std::vector<double> norm_H_sq;
    std::vector<double> norm_V_sq;
    std::vector<double> norm_DA_sq;
    std::vector<double> z;
    std::vector<double> forcing_sq;  // |f(t)|_H^2 at the recorded times
    std::vector<double> forcing_dot; // (f(t), v(t))_H
    std::vector<double> energy_residual;  // empty until computed
    int stride = 1;
    double dt = 0.0;

    std::size_t size() const { return t.size(); }
    bool all_finite() const;
};

struct EnergyParams {
    double nu = 1.0;
    double sigma = 1.0;
    double lambda1 = 1.0;
};

/// Residual of the multiplicative energy inequality
///   d/dt |v|^2 + (nu l1 - 2 sigma z)|v|^2 + (nu/2)|v|_V^2 - (2 e^{2|z|} / (nu l1)) |f|^2
/// with centred differences inside and second-order one-sided ones at the
/// ends. Requires stride 1 and at least three samples.
std::vector<double> energy_residual(const TrajectoryRecord& tr, const EnergyParams& p);

/// Defect of the exact multiplicative energy balance
///   d/dt |v|^2 + 2 nu |v|_V^2 - 2 sigma z |v|^2 - 2 e^{-z} (f, v)
/// (zero for the exact solution since b(v, v, v) = 0), same differences as above.
/// It measures discretization error only.
std::vector<double> energy_identity_defect(const TrajectoryRecord& tr, const EnergyParams& p);

/// Largest magnitude among the terms of the balance, used to scale tolerances.
double energy_scale(const TrajectoryRecord& tr, const EnergyParams& p);

/// CSV with header t,norm_H,norm_V,norm_DA,z,energy_residual (residual column
/// empty when not computed).
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& tr);

}  // namespace snslab

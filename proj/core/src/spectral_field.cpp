#include "snslab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "snslab/errors.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {

SpectralField::SpectralField(int n) : n_(n) {
    if (n < 4 || n % 2 != 0) throw ValidationError("spectral field: N must be even and >= 4");
    data_.assign(2 * modes(), cplx(0.0, 0.0));
}

void SpectralField::require_same_grid(const SpectralField& o, const char* where) const {
    if (!same_grid(o)) {
        throw ValidationError(std::string(where) + ": grid mismatch (N=" + std::to_string(n_) +
                              " vs N=" + std::to_string(o.n_) + ")");
    }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(o, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(o, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
    require_same_grid(x, "axpy");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

PhysicalField to_physical(const SpectralField& u) {
    PhysicalField p;
    p.n = u.n();
    const std::size_t nr = static_cast<std::size_t>(u.n()) * u.n();
    p.u1.resize(nr);
    p.u2.resize(nr);
    fft::backward(u.n(), u.component(0).data(), p.u1.data());
    fft::backward(u.n(), u.component(1).data(), p.u2.data());
    return p;
}

SpectralField from_physical(const PhysicalField& p) {
    SpectralField raw(p.n);
    fft::forward(p.n, p.u1.data(), raw.component(0).data());
    fft::forward(p.n, p.u2.data(), raw.component(1).data());
    return leray_project(raw);
}

void enforce_reality(SpectralField& u) {
    const int n = u.n();
    for (int comp = 0; comp < 2; ++comp) {
        u.at(comp, 0, 0) = 0.0;
        for (int ix = 1; ix < n / 2; ++ix) {
            const cplx avg = 0.5 * (u.at(comp, ix, 0) + std::conj(u.at(comp, n - ix, 0)));
            u.at(comp, ix, 0) = avg;
            u.at(comp, n - ix, 0) = std::conj(avg);
        }
        for (int ix = 0; ix < n; ++ix) u.at(comp, ix, n / 2) = 0.0;
        for (int iky = 0; iky <= n / 2; ++iky) u.at(comp, n / 2, iky) = 0.0;
    }
}

double divergence_defect(const SpectralField& u) {
    double worst = 0.0;
    for (int ix = 0; ix < u.n(); ++ix) {
        for (int iky = 0; iky < u.nky(); ++iky) {
            const double kx = u.kx(ix);
            const double ky = iky;
            const double kk = std::sqrt(kx * kx + ky * ky);
            const cplx a = u.at(0, ix, iky);
            const cplx b = u.at(1, ix, iky);
            const double mag = std::sqrt(std::norm(a) + std::norm(b));
            if (kk == 0.0 || mag == 0.0) continue;
            worst = std::max(worst, std::abs(kx * a + ky * b) / (kk * mag));
        }
    }
    return worst;
}

double reality_defect(const SpectralField& u) {
    const int n = u.n();
    double biggest = 0.0;
    for (const cplx& c : u.raw()) biggest = std::max(biggest, std::abs(c));
    if (biggest == 0.0) return 0.0;
    double worst = 0.0;
    for (int comp = 0; comp < 2; ++comp) {
        worst = std::max(worst, std::abs(u.at(comp, 0, 0)));
        for (int ix = 1; ix < n; ++ix) {
            worst = std::max(worst, std::abs(u.at(comp, ix, 0) - std::conj(u.at(comp, n - ix, 0))));
        }
    }
    return worst / biggest;
}

}  // namespace snslab

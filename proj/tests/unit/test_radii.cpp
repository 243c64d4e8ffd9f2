#include <cmath>
#include <numbers>

#include "doctest.h"
#include "snslab/radii.hpp"
#include "snslab/spectral_ops.hpp"

using namespace snslab;

namespace {

noise::OUPath zero_path() { return noise::OUPath::constant(0.0, 1.0, -200.0, 2.0, 0.01); }

}  // namespace

TEST_CASE("no forcing: K = 0 and the H radius is 1") {
    const auto z = zero_path();
    const auto r = radii_multiplicative(0.0, z, Forcing::zero(16), 0.5, 1.0, 1.0);
    CHECK(r.K == 0.0);
    CHECK(r.radius_H == 1.0);
    CHECK(r.K_tilde == doctest::Approx(std::exp(2.0 * 0.5)).epsilon(1e-12));
    CHECK(r.tail_ok);
}

TEST_CASE("constant forcing with z == 0: K = |f|^2 / (nu lambda1)") {
    const auto z = zero_path();
    const SpectralField f0 = sin_pair(16, 2, 1.0);
    const double c = norm_H_sq(f0);
    for (double nu : {0.5, 1.0, 2.0}) {
        const auto k = mult_K(0.0, z, Forcing::constant(f0), nu, 1.0, 1.0);
        CHECK(k.value == doctest::Approx(c / nu).epsilon(0.01));
        const auto r = radii_multiplicative(-3.0, z, Forcing::constant(f0), nu, 1.0, 1.0);
        CHECK(r.radius_H == doctest::Approx(1.0 + 2.0 * c / (nu * nu)).epsilon(0.01));
    }
}

TEST_CASE("example forcing with z == 0 and nu = 1: K = 7/3 |f0|^2") {
    const auto z = zero_path();
    const SpectralField f0 = sin_pair(16, 2, 1.0);
    const auto k = mult_K(0.0, z, Forcing::example(f0), 1.0, 1.0, 1.0);
    CHECK(k.value == doctest::Approx(7.0 / 3.0 * norm_H_sq(f0)).epsilon(0.01));
}

TEST_CASE("K is nondecreasing in tau") {
    const auto w = noise::sample_wiener(2024, -200.0, 2.0, 0.01);
    const auto z = noise::ou_from_wiener(w, 1.0);
    const Forcing f = Forcing::example(sin_pair(32, 2, 1.0));
    double prev = 0.0;
    for (double tau : {-10.0, -8.0, -6.0, -4.0, -2.0, 0.0}) {
        const double k = mult_K(tau, z, f, 0.5, 1.0, 1.0).value;
        CHECK(k >= prev);
        prev = k;
    }
}

TEST_CASE("additive radii in closed-form cases") {
    const auto z = zero_path();
    AdditiveParams p;
    p.nu = 0.5;
    p.sigma = 50.0;
    p.lambda1 = 1.0;
    p.aleph = 1.0;
    p.default_C = 3.0;
    const auto r0 = radii_additive(0.0, z, Forcing::zero(16), p);
    CHECK(r0.R_H == 2.0);
    CHECK(r0.rho1 == 0.0);
    CHECK(r0.C == 3.0);

    const SpectralField f0 = sin_pair(16, 2, 1.0);
    const auto r = radii_additive(0.0, z, Forcing::constant(f0), p);
    CHECK(r.rho1 == doctest::Approx(3.0 * norm_H_sq(f0) / 0.5).epsilon(0.01));
    RadiusOptions opt;
    opt.c_add = 1.0;
    CHECK(radii_additive(0.0, z, Forcing::constant(f0), p, opt).C == 1.0);
}

TEST_CASE("absorption time with z == 0") {
    const auto z = zero_path();
    // e^{-t/2} e^5 <= 1 from t = 10 on
    CHECK(absorption_time_mult(z, 0.5, 1.0, 1.0, std::exp(5.0), 50.0) == doctest::Approx(10.0).epsilon(2e-3));
    CHECK(absorption_time_add(z, 0.5, 1.0, 1.0, std::exp(5.0), 50.0) == doctest::Approx(10.0).epsilon(2e-3));
    CHECK(absorption_time_mult(z, 0.5, 1.0, 1.0, 0.5, 50.0) == 2.0);
}

TEST_CASE("tempered decay of a constant K") {
    const auto z = zero_path();
    const SpectralField f0 = sin_pair(16, 2, 1.0);
    const auto d = tempered_decay(z, Forcing::constant(f0), 0.5, 1.0, 1.0, {10.0, 40.0});
    const double K = norm_H_sq(f0) / 0.5;
    CHECK(d[0] == doctest::Approx(std::exp(-10.0 / 6.0) * K).epsilon(0.01));
    CHECK(d[1] / d[0] == doctest::Approx(std::exp(-30.0 / 6.0)).epsilon(1e-6));
}

TEST_CASE("log-space values") {
    CHECK((LogValue::of(2.0) * LogValue::of(3.0)).value() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK((LogValue::of(2.0) + LogValue::of(3.0)).value() == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(LogValue::from_log(std::log(10.0)).log10 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(LogValue::of(0.0).value() == 0.0);
    CHECK((LogValue::of(0.0) + LogValue::of(4.0)).value() == doctest::Approx(4.0));
    const LogValue huge{1234.5};
    CHECK(std::isinf(huge.value()));
    CHECK((huge + LogValue::of(1.0)).log10 == doctest::Approx(1234.5).epsilon(1e-15));
    CHECK(huge.natural_log() == doctest::Approx(1234.5 * std::numbers::ln10));
    CHECK(huge.str() == "3.162278e+1234");
}

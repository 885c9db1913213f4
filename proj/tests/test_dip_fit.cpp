#include <doctest.h>

#include <cmath>
#include <vector>

#include "specmux/dip_fit.hpp"
#include "specmux/error.hpp"
#include "specmux/hom_engine.hpp"

using namespace specmux;

TEST_CASE("noiseless synthetic dip round-trips")
{
    TemporalEnvelope env;
    double const sigma = env.sigma();
    DipFit truth;
    truth.baseline = 1.0;
    truth.visibility = 0.5;
    truth.center_s = 0.0;
    truth.width_s = sigma;
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 61; ++i) {
        x.push_back(-1.5e-9 + 3e-9 * i / 60.0);
        y.push_back(truth(x.back()));
    }
    auto const fit = fit_gaussian_dip(x, y);
    CHECK(fit.converged);
    CHECK(std::abs(fit.baseline - 1.0) < 1e-6);
    CHECK(std::abs(fit.visibility - 0.5) < 1e-6);
    CHECK(std::abs(fit.center_s) < 1e-6 * sigma);
    CHECK(std::abs(fit.width_s - sigma) < 1e-6 * sigma);
    CHECK(fit.residual_norm < 1e-9);
}

TEST_CASE("off-center asymmetric scan")
{
    DipFit truth;
    truth.baseline = 250.0;
    truth.visibility = 0.3;
    truth.center_s = 0.2e-9;
    truth.width_s = 0.4e-9;
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(-1e-9 + 3e-9 * i / 39.0);
        y.push_back(truth(x.back()));
    }
    auto const fit = fit_gaussian_dip(x, y);
    CHECK(fit.baseline == doctest::Approx(250.0).epsilon(1e-8));
    CHECK(fit.visibility == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(fit.center_s == doctest::Approx(0.2e-9).epsilon(1e-8));
    CHECK(fit.width_s == doctest::Approx(0.4e-9).epsilon(1e-8));
}

TEST_CASE("engine dip width equals the envelope sigma")
{
    InterferenceConfig c;
    c.pulse_a = make_pulse(Station::A, 1, 0.1);
    c.pulse_b = make_pulse(Station::B, 1, 0.1);
    c.detectors = uniform_detectors(1, DetectorModel{});
    auto const fit = fit_gaussian_dip(hom_dip_scan(c, DipScanOptions{}), 1);
    CHECK(std::abs(fit.width_s / c.pulse_a.envelope.sigma() - 1.0) < 0.01);
    CHECK(std::abs(fit.center_s) < 1e-15);
}

TEST_CASE("flat data fits zero visibility")
{
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 21; ++i) {
        x.push_back(i * 1e-10);
        y.push_back(3.0);
    }
    auto const fit = fit_gaussian_dip(x, y);
    CHECK(std::abs(fit.visibility) < 1e-9);
    CHECK(fit.baseline == doctest::Approx(3.0));
}

TEST_CASE("fit errors")
{
    std::vector<double> x{0, 1, 2, 3};
    std::vector<double> y{1, 0.5, 0.5, 1};
    CHECK_THROWS_AS(fit_gaussian_dip(x, y), InvalidParameter);

    DipFit truth;
    truth.baseline = 1.0;
    truth.visibility = 0.4;
    truth.width_s = 0.3;
    x.clear();
    y.clear();
    for (int i = 0; i < 30; ++i) {
        x.push_back(-1.0 + 2.0 * i / 29.0 + 0.01);
        y.push_back(truth(x.back()) * (1.0 + 0.01 * std::sin(7.0 * i)));
    }
    try {
        fit_gaussian_dip(x, y, 1);
        FAIL("expected a FitError");
    } catch (const FitError& e) {
        CHECK(e.best().iterations == 1);
        CHECK(!e.best().converged);
        CHECK(e.best().baseline > 0.0);
    }
}

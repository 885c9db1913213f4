#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "specmux/error.hpp"
#include "specmux/ssmm.hpp"

using namespace specmux;

namespace {

SsmmParams two_channel(double peak, double rejection_db)
{
    SsmmParams p;
    p.grid = {0.0, 8e9, 2};
    p.peak_coupling = peak;
    p.adjacent_rejection_db = rejection_db;
    return p;
}

// FWHM of the passband whose response at `spacing` is `rejection_db` below
// the peak, by bisection on the passband of a trial model.
double fwhm_by_bisection(double spacing, double rejection_db)
{
    double lo = 1e6;
    double hi = 1e12;
    for (int i = 0; i < 200; ++i) {
        double const mid = std::sqrt(lo * hi);
        SsmmParams p;
        p.grid = {0.0, spacing, 1};
        p.passband_fwhm_hz = mid;
        double const db = -10.0 * std::log10(SsmmModel(p).passband(spacing));
        (db > rejection_db ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("center channel transmission equals the peak coupling")
{
    SsmmParams p;
    p.grid = {0.0, 8e9, 7};
    p.adjacent_rejection_db = 10.0;
    p.peak_coupling = 0.05;
    SsmmModel const model(p);
    CHECK(model.transmission(3, 0.0) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(model.transmission(3, INFINITY) == 0.0);
    CHECK(model.transmission(3, -INFINITY) == 0.0);
    CHECK(model.transmission(0, 1e15) == 0.0);
    CHECK_THROWS_AS(model.transmission(7, 0.0), InvalidParameter);
    CHECK_THROWS_AS(model.transmission(-1, 0.0), InvalidParameter);
}

TEST_CASE("rejection sets the passband width, confirmed by root finding")
{
    for (double r : {3.0, 10.0, 18.0, 30.0}) {
        double const closed = passband_fwhm_for_rejection(8e9, r);
        CHECK(std::abs(closed - fwhm_by_bisection(8e9, r)) / closed < 1e-10);
    }
    SsmmParams p = two_channel(0.5, 18.0);
    p.envelope_shape = CouplingEnvelope::flat;
    SsmmModel const model(p);
    CHECK(model.transmission(0, model.grid().offset(1)) == doctest::Approx(0.5 * std::pow(10.0, -1.8)).epsilon(1e-12));
    CHECK(model.transmission(0, model.grid().offset(1)) == doctest::Approx(7.92e-3).epsilon(1e-3));
    CHECK_THROWS_AS(passband_fwhm_for_rejection(8e9, 0.0), InvalidParameter);
}

TEST_CASE("crosstalk matrix examples")
{
    SsmmParams one;
    one.grid = {0.0, 8e9, 1};
    one.peak_coupling = 0.05;
    auto const t1 = SsmmModel(one).crosstalk_matrix();
    CHECK(t1.size() == 1);
    CHECK(t1(0, 0) == doctest::Approx(0.05).epsilon(1e-15));

    SsmmParams flat = two_channel(0.05, 10.0);
    flat.envelope_shape = CouplingEnvelope::flat;
    auto const t2 = SsmmModel(flat).crosstalk_matrix();
    CHECK(t2(0, 0) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(t2(1, 1) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(t2(0, 1) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(t2(1, 0) == doctest::Approx(0.005).epsilon(1e-12));

    SsmmParams seven;
    seven.grid = {0.0, 8e9, 7};
    seven.adjacent_rejection_db = 10.0;
    auto const t7 = SsmmModel(seven).crosstalk_matrix();
    CHECK(t7(0, 0) < t7(3, 3));
    CHECK(t7(6, 6) < t7(3, 3));
}

TEST_CASE("frequency response peaks at the channel centers")
{
    SsmmModel const model(two_channel(0.05, 10.0));
    auto const scan = frequency_response_scan(model, -6e9, 6e9, 100e6);
    CHECK(scan.rows.size() == 121);
    CHECK(scan.columns == std::vector<std::string>{"frequency_hz", "transmission_ch1", "transmission_ch2"});
    for (int c = 0; c < 2; ++c) {
        auto const col = scan.column(static_cast<std::size_t>(c) + 1);
        auto const peak = static_cast<std::size_t>(std::max_element(col.begin(), col.end()) - col.begin());
        CHECK(std::abs(scan.rows[peak][0] - model.grid().offset(c)) <= 100e6);
    }
    double const ratio = model.transmission(0, -4e9) / model.transmission(0, 4e9);
    CHECK(std::abs(10.0 * std::log10(ratio) - 10.0) < 1e-9);
    CHECK_THROWS_AS(frequency_response_scan(model, 1e9, -1e9, 1e6), InvalidParameter);
    CHECK_THROWS_AS(frequency_response_scan(model, -1e9, 1e9, 0.0), InvalidParameter);
}

TEST_CASE("single channel response is unimodal")
{
    SsmmParams p;
    p.grid = {0.0, 8e9, 1};
    auto const col = frequency_response_scan(SsmmModel(p), -6e9, 6e9, 100e6).column(1);
    auto const peak = std::max_element(col.begin(), col.end()) - col.begin();
    for (std::ptrdiff_t i = 1; i <= peak; ++i) {
        CHECK(col[static_cast<std::size_t>(i)] >= col[static_cast<std::size_t>(i - 1)]);
    }
    for (std::size_t i = static_cast<std::size_t>(peak) + 1; i < col.size(); ++i) {
        CHECK(col[i] <= col[i - 1]);
    }
}

TEST_CASE("transmission peaks at the channel center on a 1 MHz grid")
{
    SsmmParams p;
    p.grid = {0.0, 8e9, 7};
    p.adjacent_rejection_db = 10.0;
    p.peak_coupling = 0.5;
    SsmmModel const model(p);
    for (int c = 0; c < 7; ++c) {
        double const center = model.grid().offset(c);
        double const peak = model.transmission(c, center);
        for (double df = -4e9; df <= 4e9; df += 1e6) {
            CHECK_MESSAGE(model.transmission(c, center + df) <= peak, "channel ", c, " detuning ", df);
        }
    }
}

TEST_CASE("random models satisfy the crosstalk invariants")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int built = 0;
    for (int trial = 0; trial < 500; ++trial) {
        SsmmParams p;
        p.grid = {2e9 * (unit(rng) - 0.5), 2e9 + 10e9 * unit(rng), 1 + static_cast<int>(6 * unit(rng))};
        p.peak_coupling = unit(rng);
        p.adjacent_rejection_db = 3.0 + 30.0 * unit(rng);
        p.envelope_bandwidth_hz = 100e9;
        try {
            SsmmModel const model(p);
            ++built;
            auto const t = model.crosstalk_matrix();
            for (int m = 0; m < t.size(); ++m) {
                double column = 0.0;
                for (int c = 0; c < t.size(); ++c) {
                    CHECK(t(c, m) >= 0.0);
                    CHECK(t(c, m) <= 1.0);
                    column += t(c, m);
                    if (c != m) {
                        CHECK(t(m, m) > t(c, m));
                    }
                }
                CHECK(column <= 1.0);
            }
        } catch (const InvalidParameter&) {
            // passband too wide for the grid
        }
    }
    CHECK(built > 250);
}

TEST_CASE("diagonal entries fall off away from the nominal frequency")
{
    SsmmParams p;
    p.grid = {0.0, 3.2e9, 20};
    p.peak_coupling = 0.5;
    SsmmModel const model(p);
    auto const t = model.crosstalk_matrix();
    auto const order = center_outward_order(model.grid());
    for (std::size_t i = 1; i < order.size(); ++i) {
        CHECK(t(order[i], order[i]) <= t(order[i - 1], order[i - 1]));
    }
}

TEST_CASE("SSMM parameter validation")
{
    SsmmParams p = two_channel(1.5, 10.0);
    CHECK_THROWS_AS(SsmmModel{p}, InvalidParameter);
    p = two_channel(0.5, -1.0);
    CHECK_THROWS_AS(SsmmModel{p}, InvalidParameter);
    p = two_channel(1.0, 1.0);  // adjacent leakage pushes the column sum above 1
    CHECK_THROWS_AS(SsmmModel{p}, InvalidParameter);
    SsmmParams wide;
    wide.grid = {0.0, 8e9, 10};
    wide.adjacent_rejection_db = 10.0;
    CHECK_THROWS_AS(SsmmModel{wide}, ConstraintViolation);
    SsmmParams dense;
    dense.grid = {0.0, 3.2e9, 20};
    CHECK_NOTHROW(SsmmModel{dense});
}

TEST_CASE("spatial position scales with focal length")
{
    SsmmParams p = two_channel(0.05, 10.0);
    p.focal_length_m = 2.0;
    SsmmModel const model(p);
    CHECK(model.spatial_position_m(1) == doctest::Approx(2.0 * p.angular_dispersion_rad_per_hz * 4e9));
    CHECK(model.spatial_position_m(0) == doctest::Approx(-model.spatial_position_m(1)));
}

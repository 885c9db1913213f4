#include <doctest.h>

#include <cmath>
#include <random>

#include "specmux/error.hpp"
#include "specmux/qubit_model.hpp"

using namespace specmux;

TEST_CASE("build_state examples")
{
    auto const late = build_state({0.0, 1000.0, 0.0, 0.0, Basis::Z});
    CHECK(late.m == 0.0);
    CHECK(late.b == 0.0);
    CHECK(std::abs(late.early) == 0.0);
    CHECK(std::abs(late.late - complex{1.0, 0.0}) < 1e-15);

    auto const plus = build_state({500.0, 500.0, 0.0, 0.0, Basis::X});
    CHECK(plus.early.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(plus.late.real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(plus.late.imag() == 0.0);

    auto const mixed = build_state({300.0, 600.0, 90.0, 0.0, Basis::Z});
    CHECK(mixed.m == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(mixed.b == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(std::norm(mixed.early) == doctest::Approx((1.0 / 3.0 + 0.1) / 1.2).epsilon(1e-14));
    CHECK(std::norm(mixed.early) == doctest::Approx(0.3611).epsilon(1e-4));
    CHECK(std::norm(mixed.late) == doctest::Approx(0.6389).epsilon(1e-4));

    auto const minus = build_state({500.0, 500.0, 0.0, kPi, Basis::X});
    CHECK(std::abs(minus.late + complex{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
}

TEST_CASE("build_state rejects empty or negative signals")
{
    CHECK_THROWS_AS(build_state({0.0, 0.0, 1.0, 0.0, Basis::Z}), InvalidParameter);
    CHECK_THROWS_AS(build_state({-1.0, 10.0, 0.0, 0.0, Basis::Z}), InvalidParameter);
    CHECK_THROWS_AS(build_state({1.0, 10.0, -1.0, 0.0, Basis::Z}), InvalidParameter);
}

TEST_CASE("random states are normalized")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> counts(0.0, 1000.0);
    std::uniform_real_distribution<double> phase(-10.0, 10.0);
    for (int i = 0; i < 10000; ++i) {
        TimeBinQubitSpec spec{counts(rng), counts(rng) + 1e-3, counts(rng), phase(rng), Basis::X};
        auto const s = build_state(spec);
        CHECK(std::abs(std::norm(s.early) + std::norm(s.late) - 1.0) < 1e-12);
        CHECK(s.m + s.b >= 0.0);
        CHECK(1.0 - s.m + s.b >= 0.0);
    }
}

TEST_CASE("basis error rate examples")
{
    auto const plus = build_state({500.0, 500.0, 0.0, 0.0, Basis::X});
    auto const late = build_state({0.0, 1000.0, 0.0, 0.0, Basis::Z});
    auto const ideal = basis_error_rates(plus, plus, 0.5);
    CHECK(ideal.x == 0.0);
    CHECK(basis_error_rates(late, late, 0.5).z == 0.0);
    CHECK(basis_error_rates(plus, plus, 0.0).x == 0.5);
    CHECK(basis_error_rates(plus, plus, 0.42).x == doctest::Approx(0.08).epsilon(1e-12));
    CHECK_THROWS_AS(basis_error_rates(plus, plus, 0.6), InvalidParameter);
    CHECK_THROWS_AS(basis_error_rates(plus, plus, -0.1), InvalidParameter);
}

TEST_CASE("background drives the Z error")
{
    auto const noisy = build_state({0.0, 1000.0, 10.0, 0.0, Basis::Z});
    double const wrong = 0.01 / 1.02;
    CHECK(basis_error_rates(noisy, noisy, 0.5).z == doctest::Approx(2.0 * wrong * (1.0 - wrong)).epsilon(1e-14));
    auto const leaky = build_state({20.0, 980.0, 0.0, 0.0, Basis::Z});
    CHECK(basis_error_rates(leaky, leaky, 0.5).z == 0.0);
    CHECK(basis_error_rates(leaky, leaky, 0.5, 1.0).z > 0.0);
}

TEST_CASE("X error is monotone non-increasing in visibility")
{
    auto const a = build_state({400.0, 600.0, 20.0, 0.3, Basis::X});
    auto const b = build_state({500.0, 500.0, 5.0, 0.0, Basis::X});
    double previous = 1.0;
    for (int i = 0; i <= 100; ++i) {
        double const e = basis_error_rates(a, b, 0.005 * i).x;
        CHECK(e <= previous);
        CHECK(e >= 0.0);
        CHECK(e <= 0.5);
        previous = e;
    }
}

#include <doctest.h>

#include <array>
#include <cmath>

#include "specmux/error.hpp"
#include "specmux/mdi_keyrate.hpp"

using namespace specmux;

namespace {

// Gains and error rates of phase-randomized coherent pulses in an ideal
// time-bin BSM with threshold detectors of background probability y0, for
// ideal states and no misalignment.
struct ClosedForm {
    double q_z;
    double e_z;
    double q_x;
    double e_x;
};

ClosedForm closed_form(double ta, double tb, double mu, double y0)
{
    double const mu_sum = ta * mu + tb * mu;
    double const x = std::sqrt(ta * mu * tb * mu) / 2.0;
    double const keep = (1.0 - y0) * (1.0 - y0);
    double const qc = 2.0 * keep * std::exp(-mu_sum / 2.0) * (1.0 - (1.0 - y0) * std::exp(-ta * mu / 2.0)) *
                      (1.0 - (1.0 - y0) * std::exp(-tb * mu / 2.0));
    double const qe =
        2.0 * y0 * keep * std::exp(-mu_sum / 2.0) * (std::cyl_bessel_i(0.0, 2.0 * x) - (1.0 - y0) * std::exp(-mu_sum / 2.0));
    double const y = (1.0 - y0) * std::exp(-mu_sum / 4.0);
    double const q_x = 2.0 * y * y *
                       (1.0 + 2.0 * y * y - 4.0 * y * std::cyl_bessel_i(0.0, x) + std::cyl_bessel_i(0.0, 2.0 * x));
    double const eq_x = 0.5 * q_x - 2.0 * 0.5 * y * y * (std::cyl_bessel_i(0.0, 2.0 * x) - 1.0);
    return {qc + qe, qe / (qc + qe), q_x, eq_x / q_x};
}

// Single-photon yield by enumerating photon fates in the four (port, bin)
// detection slots, averaged over the Z-basis state pairs.
double single_photon_yield_by_enumeration(double ta, double tb, double y0)
{
    double total = 0.0;
    for (int bin_a = 0; bin_a < 2; ++bin_a) {
        for (int bin_b = 0; bin_b < 2; ++bin_b) {
            // photon fate: 0 lost, 1 port +, 2 port -
            for (int fa = 0; fa < 3; ++fa) {
                for (int fb = 0; fb < 3; ++fb) {
                    double p = (fa == 0 ? 1.0 - ta : ta / 2.0) * (fb == 0 ? 1.0 - tb : tb / 2.0);
                    if (fa != 0 && fb != 0 && bin_a == bin_b) {
                        // indistinguishable photons bunch
                        if (fa != fb) {
                            continue;
                        }
                        p = ta * tb / 2.0;
                    }
                    std::array<std::array<bool, 2>, 2> lit{};
                    if (fa != 0) {
                        lit[static_cast<std::size_t>(fa - 1)][static_cast<std::size_t>(bin_a)] = true;
                    }
                    if (fb != 0) {
                        lit[static_cast<std::size_t>(fb - 1)][static_cast<std::size_t>(bin_b)] = true;
                    }
                    // sum over dark-click patterns with exactly one click per bin
                    double success = 0.0;
                    for (int pattern = 0; pattern < 16; ++pattern) {
                        double w = 1.0;
                        std::array<int, 2> per_bin{};
                        for (int s = 0; s < 4; ++s) {
                            bool const dark = (pattern >> s) & 1;
                            bool const photon = lit[static_cast<std::size_t>(s / 2)][static_cast<std::size_t>(s % 2)];
                            w *= dark ? y0 : 1.0 - y0;
                            per_bin[static_cast<std::size_t>(s % 2)] += (photon || dark) ? 1 : 0;
                        }
                        if (per_bin[0] == 1 && per_bin[1] == 1) {
                            success += w;
                        }
                    }
                    total += 0.25 * p * success;
                }
            }
        }
    }
    return total;
}

ScenarioConfig single(double peak)
{
    ScenarioConfig s = scenario_preset("current");
    s.ssmm.peak_coupling = peak;
    s.mode_count = 1;
    return s;
}

}  // namespace

TEST_CASE("BSM statistics match the coherent-state closed forms")
{
    auto const e = build_state({1000.0, 0.0, 0.0, 0.0, Basis::Z});
    auto const l = build_state({0.0, 1000.0, 0.0, 0.0, Basis::Z});
    auto const plus = build_state({500.0, 500.0, 0.0, 0.0, Basis::X});
    auto const minus = build_state({500.0, 500.0, 0.0, kPi, Basis::X});
    for (auto [ta, tb, y0] : {std::array<double, 3>{0.04, 0.04, 1e-6}, {0.4, 0.3, 1e-4}, {0.8, 0.8, 0.0},
                              {0.1, 0.6, 1e-3}}) {
        auto const ref = closed_form(ta, tb, 0.1, y0);
        auto const z = bsm_statistics(Basis::Z, e, l, ta, tb, y0, 0.1, 1.0, 256);
        auto const x = bsm_statistics(Basis::X, plus, minus, ta, tb, y0, 0.1, 1.0, 256);
        CHECK(z.gain == doctest::Approx(ref.q_z).epsilon(1e-10));
        CHECK(z.error == doctest::Approx(ref.e_z).epsilon(1e-9));
        CHECK(x.gain == doctest::Approx(ref.q_x).epsilon(1e-10));
        CHECK(x.error == doctest::Approx(ref.e_x).epsilon(1e-9));
    }
}

TEST_CASE("single-photon yield matches photon-fate enumeration")
{
    for (auto [ta, tb, y0] : {std::array<double, 3>{0.04, 0.04, 1e-6}, {0.4, 0.3, 1e-2}, {1.0, 1.0, 0.0},
                              {0.1, 0.6, 0.2}}) {
        CHECK(single_photon_yield(ta, tb, y0) ==
              doctest::Approx(single_photon_yield_by_enumeration(ta, tb, y0)).epsilon(1e-12));
    }
}

TEST_CASE("single-photon error limits")
{
    CHECK(single_photon_error(0.3, 0.4, 0.0, 0.08) == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(single_photon_error(0.3, 0.4, 1e-3, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(single_photon_error(0.3, 0.4, 1e-3, 0.08) > 0.08);
}

TEST_CASE("binary entropy")
{
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.11) == doctest::Approx(binary_entropy(0.89)).epsilon(1e-14));
}

TEST_CASE("mode key rate examples")
{
    CHECK(mode_key_rate(single(0.0), 0).rate_bits_per_s == 0.0);
    auto s = single(0.5);
    s.hom_visibility = 0.0;
    auto const r = mode_key_rate(s, 0);
    CHECK(r.error_11 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.rate_bits_per_s == 0.0);
    CHECK(mode_key_rate(single(0.5), 0).rate_bits_per_s > 0.0);
    CHECK_THROWS_AS(mode_key_rate(single(0.5), 1), InvalidParameter);
}

TEST_CASE("gain ratio follows the squared coupling ratio for weak pulses")
{
    auto low = single(0.05);
    auto high = single(0.5);
    for (auto* s : {&low, &high}) {
        s->mean_photon_number = 1e-3;
        s->detector.dark_click_probability = 0.0;
    }
    double const ratio = mode_key_rate(high, 0).z.gain / mode_key_rate(low, 0).z.gain;
    CHECK(ratio == doctest::Approx(100.0).epsilon(1e-2));
}

TEST_CASE("lossless SSMM with one mode reproduces the baseline exactly")
{
    ScenarioConfig s = scenario_preset("current");
    s.ssmm.peak_coupling = 1.0;
    s.ssmm.envelope_shape = CouplingEnvelope::flat;
    s.ssmm.adjacent_rejection_db.reset();
    s.ssmm.passband_fwhm_hz = 1e9;
    auto const curve = enhancement_curve(s, 1);
    CHECK(curve.rows[0].enhancement == 1.0);
}

TEST_CASE("enhancement is invariant under source-rate scaling")
{
    auto a = scenario_preset("soa_coupling");
    auto b = a;
    b.source_rate_hz *= 7.3;
    auto const ca = enhancement_curve(a, a.max_modes());
    auto const cb = enhancement_curve(b, b.max_modes());
    for (std::size_t i = 0; i < ca.rows.size(); ++i) {
        CHECK(cb.rows[i].enhancement == doctest::Approx(ca.rows[i].enhancement).epsilon(1e-13));
        CHECK(cb.rows[i].rate_bits_per_s == doctest::Approx(7.3 * ca.rows[i].rate_bits_per_s).epsilon(1e-13));
    }
}

TEST_CASE("scenario enhancement curves")
{
    auto const current = enhancement_curve(scenario_preset("current"), 7);
    for (const auto& row : current.rows) {
        CHECK(row.enhancement < 1.0);
    }

    auto const soa = enhancement_curve(scenario_preset("soa_coupling"), 7);
    int crossover = 0;
    for (const auto& row : soa.rows) {
        if (row.enhancement >= 1.0) {
            crossover = row.modes;
            break;
        }
    }
    CHECK(crossover >= 4);
    CHECK(crossover <= 7);

    auto const dense = enhancement_curve(scenario_preset("soa_coupling_dense"), 20);
    CHECK(dense.rows.back().enhancement >= 2.8);
    CHECK(dense.rows.back().enhancement <= 4.0);

    for (const auto* curve : {&current, &soa, &dense}) {
        for (std::size_t i = 1; i < curve->rows.size(); ++i) {
            CHECK(curve->rows[i].rate_bits_per_s >= curve->rows[i - 1].rate_bits_per_s);
        }
        for (std::size_t i = 2; i < curve->rows.size(); ++i) {
            double const d2 = curve->rows[i].enhancement - 2.0 * curve->rows[i - 1].enhancement +
                              curve->rows[i - 2].enhancement;
            CHECK(d2 <= 1e-9);
        }
    }
}

TEST_CASE("mode limits")
{
    auto const s = scenario_preset("current");
    CHECK(s.max_modes() == 7);
    CHECK(scenario_preset("soa_coupling_dense").max_modes() == 20);
    try {
        enhancement_curve(s, 8);
        FAIL("expected a constraint violation");
    } catch (const ConstraintViolation& e) {
        CHECK(std::string(e.what()).find("limit of 7 modes") != std::string::npos);
    }
    CHECK_THROWS_AS(scenario_preset("nonsense"), ConfigError);
    CHECK(bandwidth_mode_limit(60e9, 8e9) == 7);
    CHECK(bandwidth_mode_limit(60e9, 3.2e9) == 18);
}

TEST_CASE("crosstalk noise only lowers the rate")
{
    auto s = scenario_preset("soa_coupling");
    auto noisy = s;
    noisy.crosstalk_noise = true;
    for (int k = 0; k < s.mode_count; ++k) {
        auto const quiet = mode_key_rate(s, k);
        auto const loud = mode_key_rate(noisy, k);
        CHECK(loud.noise > quiet.noise);
        CHECK(loud.rate_bits_per_s <= quiet.rate_bits_per_s);
    }
}

TEST_CASE("rate table layout")
{
    auto const table = enhancement_curve(scenario_preset("current"), 3).table();
    CHECK(table.columns == std::vector<std::string>{"M", "rate_bits_per_s", "enhancement"});
    CHECK(table.rows.size() == 3);
    CHECK(table.rows[2][0] == 3.0);
}

#include "specmux/fock_oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "specmux/error.hpp"

namespace specmux {
namespace {

double const kTruncationLimit = 1e-8;

// Probability that a Poisson variable with the given mean exceeds n_max.
double poisson_tail(double mean, int n_max)
{
    if (mean <= 0.0) {
        return 0.0;
    }
    double term = std::exp(-mean);
    for (int n = 1; n <= n_max + 1; ++n) {
        term *= mean / n;
    }
    // term is P(n_max + 1); the remaining terms shrink geometrically.
    double tail = 0.0;
    for (int n = n_max + 1; n < n_max + 200 && term > 0.0; ++n) {
        tail += term;
        term *= mean / (n + 1);
    }
    return tail;
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Amplitudes <p, q| U |n_a, n_b> of a balanced beam splitter with
// a^dag -> (c^dag + d^dag)/sqrt2 and b^dag -> (c^dag - d^dag)/sqrt2.
class BeamSplitterTable {
  public:
    explicit BeamSplitterTable(int n_max) : n_max_(n_max), size_(n_max + 1)
    {
        table_.assign(static_cast<std::size_t>(size_ * size_ * (2 * n_max + 1)), 0.0);
        for (int na = 0; na <= n_max; ++na) {
            for (int nb = 0; nb <= n_max; ++nb) {
                int const total = na + nb;
                double const norm = std::pow(std::sqrt(0.5), total) /
                                    std::sqrt(std::tgamma(na + 1.0) * std::tgamma(nb + 1.0));
                for (int p = 0; p <= total; ++p) {
                    int const q = total - p;
                    double sum = 0.0;
                    for (int i = 0; i <= na; ++i) {
                        int const j = p - i;  // creation operators from b that go to c
                        if (j < 0 || j > nb) {
                            continue;
                        }
                        double const sign = ((nb - j) % 2) ? -1.0 : 1.0;
                        sum += binomial(na, i) * binomial(nb, j) * sign;
                    }
                    at(na, nb, p) = norm * sum * std::sqrt(std::tgamma(p + 1.0) * std::tgamma(q + 1.0));
                }
            }
        }
    }

    double at(int na, int nb, int p) const { return table_[index(na, nb, p)]; }
    int n_max() const { return n_max_; }

  private:
    double& at(int na, int nb, int p) { return table_[index(na, nb, p)]; }
    std::size_t index(int na, int nb, int p) const
    {
        return static_cast<std::size_t>((na * size_ + nb) * (2 * n_max_ + 1) + p);
    }

    int n_max_;
    int size_;
    std::vector<double> table_;
};

struct NoClickMoments {
    double first;   // <x^n_plus>
    double second;  // <y^n_minus>
    double both;    // <x^n_plus y^n_minus>
};

// Moments of the output photon-number distribution for coherent inputs
// alpha (port a) and beta (port b), truncated at n_max each.
NoClickMoments two_mode_moments(const BeamSplitterTable& bs, complex alpha, complex beta, double x, double y)
{
    int const n_max = bs.n_max();
    std::vector<complex> ca(static_cast<std::size_t>(n_max + 1));
    std::vector<complex> cb(static_cast<std::size_t>(n_max + 1));
    ca[0] = std::exp(-0.5 * std::norm(alpha));
    cb[0] = std::exp(-0.5 * std::norm(beta));
    for (int n = 1; n <= n_max; ++n) {
        ca[static_cast<std::size_t>(n)] = ca[static_cast<std::size_t>(n - 1)] * alpha / std::sqrt(double(n));
        cb[static_cast<std::size_t>(n)] = cb[static_cast<std::size_t>(n - 1)] * beta / std::sqrt(double(n));
    }

    NoClickMoments out{0.0, 0.0, 0.0};
    for (int total = 0; total <= 2 * n_max; ++total) {
        int const lo = std::max(0, total - n_max);
        int const hi = std::min(n_max, total);
        for (int p = 0; p <= total; ++p) {
            complex amplitude{0.0, 0.0};
            for (int na = lo; na <= hi; ++na) {
                int const nb = total - na;
                amplitude += ca[static_cast<std::size_t>(na)] * cb[static_cast<std::size_t>(nb)] * bs.at(na, nb, p);
            }
            double const prob = std::norm(amplitude);
            double const xp = std::pow(x, p);
            double const yq = std::pow(y, total - p);
            out.first += prob * xp;
            out.second += prob * yq;
            out.both += prob * xp * yq;
        }
    }
    return out;
}

}  // namespace

FockOracleResult fock_oracle_coincidence(const InterferenceConfig& config, int channel_1, int channel_2, int n_max)
{
    config.validate();
    int const modes = config.mode_count();
    if (modes > 2) {
        throw InvalidParameter("Fock oracle supports at most two spectral modes");
    }
    if (channel_1 < 0 || channel_1 >= modes || channel_2 < 0 || channel_2 >= modes) {
        throw InvalidParameter("channel index out of range");
    }
    if (n_max < 6) {
        throw TruncationError("Fock oracle needs n_max >= 6, got " + std::to_string(n_max));
    }

    // The interference term fixes how much of B's pulse shares A's temporal
    // mode: gamma = <a|b> = term / sqrt(mu_a mu_b).
    auto const terms = interference_terms(config);
    std::vector<double> mu_a(static_cast<std::size_t>(modes));
    std::vector<complex> gamma(static_cast<std::size_t>(modes));
    std::vector<double> mu_b(static_cast<std::size_t>(modes));
    double bound = 0.0;
    for (int m = 0; m < modes; ++m) {
        auto const mi = static_cast<std::size_t>(m);
        mu_a[mi] = config.pulse_a.mean_photon_number[mi];
        mu_b[mi] = config.pulse_b.mean_photon_number[mi];
        double const scale = std::sqrt(mu_a[mi] * mu_b[mi]);
        gamma[mi] = scale > 0.0 ? terms[mi] / scale : complex{0.0, 0.0};
        double const parallel = std::norm(gamma[mi]) * mu_b[mi];
        // Each truncated input loses at most its tail weight; the norm
        // deficit bounds the error of every moment twice over.
        bound += 2.0 * (poisson_tail(mu_a[mi], n_max) + poisson_tail(parallel, n_max) +
                        poisson_tail(mu_b[mi] - parallel, n_max));
    }
    if (bound > kTruncationLimit) {
        throw TruncationError("photon-number truncation at n_max = " + std::to_string(n_max) +
                              " leaves an error bound of " + std::to_string(bound));
    }

    BeamSplitterTable const bs(n_max);
    auto const& det_1 = config.detectors[0][static_cast<std::size_t>(channel_1)];
    auto const& det_2 = config.detectors[1][static_cast<std::size_t>(channel_2)];
    auto const nodes = phase_nodes(config.quadrature_nodes);
    double const inv_nodes = 1.0 / static_cast<double>(nodes.size());

    // Moments for one mode at one phase, combining the interfering and the
    // orthogonal subsystems.
    auto mode_moments = [&](int m, double phi) {
        auto const mi = static_cast<std::size_t>(m);
        double const x = 1.0 - det_1.efficiency * config.transfer_1(channel_1, m);
        double const y = 1.0 - det_2.efficiency * config.transfer_2(channel_2, m);
        complex const alpha = std::sqrt(mu_a[mi]);
        complex const beta = std::sqrt(mu_b[mi]) * gamma[mi] * std::polar(1.0, phi);
        complex const beta_perp = std::sqrt(mu_b[mi] * std::max(0.0, 1.0 - std::norm(gamma[mi])));
        auto const in = two_mode_moments(bs, alpha, beta, x, y);
        auto const out = two_mode_moments(bs, complex{0.0, 0.0}, beta_perp, x, y);
        return NoClickMoments{in.first * out.first, in.second * out.second, in.both * out.both};
    };

    double none_1 = 0.0;
    double none_2 = 0.0;
    double none_both = 0.0;
    if (config.phase_model == PhaseModel::correlated) {
        for (double phi : nodes) {
            NoClickMoments product{1.0, 1.0, 1.0};
            for (int m = 0; m < modes; ++m) {
                auto const k = mode_moments(m, phi);
                product.first *= k.first;
                product.second *= k.second;
                product.both *= k.both;
            }
            none_1 += product.first * inv_nodes;
            none_2 += product.second * inv_nodes;
            none_both += product.both * inv_nodes;
        }
    } else {
        none_1 = none_2 = none_both = 1.0;
        for (int m = 0; m < modes; ++m) {
            NoClickMoments mean{0.0, 0.0, 0.0};
            for (double phi : nodes) {
                auto const k = mode_moments(m, phi);
                mean.first += k.first * inv_nodes;
                mean.second += k.second * inv_nodes;
                mean.both += k.both * inv_nodes;
            }
            none_1 *= mean.first;
            none_2 *= mean.second;
            none_both *= mean.both;
        }
    }

    double const keep_1 = 1.0 - det_1.dark_click_probability;
    double const keep_2 = 1.0 - det_2.dark_click_probability;
    double const p = 1.0 - keep_1 * none_1 - keep_2 * none_2 + keep_1 * keep_2 * none_both;
    return {p, bound};
}

}  // namespace specmux

#pragma once

#include <array>
#include <span>
#include <stdexcept>

#include "specmux/sweep.hpp"

namespace specmux {

/// Parameters of C(t) = baseline * (1 - visibility * exp(-(t - center)^2 / (2 width^2))).
struct DipFit {
    double baseline = 0.0;
    double visibility = 0.0;
    double center_s = 0.0;
    double width_s = 0.0;

    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    // Standard errors from the residual variance and the Jacobian at the
    // optimum, in parameter order (baseline, visibility, center, width).
    std::array<double, 4> standard_error{};

    double operator()(double t) const;
};

class FitError : public std::runtime_error {
  public:
    FitError(const std::string& what, DipFit best) : std::runtime_error(what), best_(best) {}
    const DipFit& best() const noexcept { return best_; }

  private:
    DipFit best_;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of a Gaussian dip.
/// Initialization: baseline = max, center = first argmin, width = range / 6.
DipFit fit_gaussian_dip(std::span<const double> delay_s, std::span<const double> counts,
                        int max_iterations = 200);

/// Fits column `column` of a dip scan against its first column.
DipFit fit_gaussian_dip(const SweepResult& points, std::size_t column = 1, int max_iterations = 200);

}  // namespace specmux

#include "specmux/dip_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "specmux/error.hpp"

namespace specmux {
namespace {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

struct Problem {
    std::vector<double> x;  // delays, centered and scaled to O(1)
    std::vector<double> y;  // counts scaled to O(1)
};

double model(const Vector4& p, double x)
{
    double const u = (x - p[2]) / p[3];
    return p[0] * (1.0 - p[1] * std::exp(-0.5 * u * u));
}

double cost(const Problem& prob, const Vector4& p)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < prob.x.size(); ++i) {
        double const r = model(p, prob.x[i]) - prob.y[i];
        sum += r * r;
    }
    return 0.5 * sum;
}

void normal_equations(const Problem& prob, const Vector4& p, Matrix4& jtj, Vector4& jtr)
{
    jtj.setZero();
    jtr.setZero();
    for (std::size_t i = 0; i < prob.x.size(); ++i) {
        double const d = prob.x[i] - p[2];
        double const g = std::exp(-0.5 * d * d / (p[3] * p[3]));
        Vector4 j;
        j[0] = 1.0 - p[1] * g;
        j[1] = -p[0] * g;
        j[2] = -p[0] * p[1] * g * d / (p[3] * p[3]);
        j[3] = -p[0] * p[1] * g * d * d / (p[3] * p[3] * p[3]);
        double const r = model(p, prob.x[i]) - prob.y[i];
        jtj.noalias() += j * j.transpose();
        jtr += j * r;
    }
}

}  // namespace

double DipFit::operator()(double t) const
{
    double const u = (t - center_s) / width_s;
    return baseline * (1.0 - visibility * std::exp(-0.5 * u * u));
}

DipFit fit_gaussian_dip(std::span<const double> delay_s, std::span<const double> counts, int max_iterations)
{
    if (delay_s.size() != counts.size()) {
        throw InvalidParameter("dip fit needs as many counts as delays");
    }
    std::size_t const n = delay_s.size();
    if (n < 5) {
        throw InvalidParameter("dip fit needs at least 5 points");
    }
    auto const [xmin_it, xmax_it] = std::minmax_element(delay_s.begin(), delay_s.end());
    double const x_mid = 0.5 * (*xmin_it + *xmax_it);
    double const x_scale = 0.5 * (*xmax_it - *xmin_it);
    double const y_scale = *std::max_element(counts.begin(), counts.end());
    if (!(x_scale > 0.0) || !(y_scale > 0.0)) {
        throw InvalidParameter("dip fit needs a non-empty delay range and positive counts");
    }

    Problem prob;
    prob.x.reserve(n);
    prob.y.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        prob.x.push_back((delay_s[i] - x_mid) / x_scale);
        prob.y.push_back(counts[i] / y_scale);
    }

    auto const argmin = static_cast<std::size_t>(
        std::distance(prob.y.begin(), std::min_element(prob.y.begin(), prob.y.end())));
    Vector4 p(1.0, 1.0 - prob.y[argmin], prob.x[argmin], 2.0 / 6.0);

    double current = cost(prob, p);
    double damping = 1e-3;
    int iter = 0;
    bool converged = current == 0.0;
    Matrix4 jtj;
    Vector4 jtr;
    while (!converged && iter < max_iterations) {
        ++iter;
        normal_equations(prob, p, jtj, jtr);
        if (jtr.cwiseAbs().maxCoeff() <= 1e-15) {
            converged = true;
            break;
        }
        // A flat dip leaves the center and width columns empty; the floor on
        // the diagonal keeps the damped system solvable.
        double const floor = 1e-12 * std::max(jtj.diagonal().maxCoeff(), 1e-300);
        bool stepped = false;
        while (!stepped) {
            Matrix4 a = jtj;
            for (int k = 0; k < 4; ++k) {
                a(k, k) += damping * std::max(jtj(k, k), floor) + floor;
            }
            Vector4 const step = a.ldlt().solve(-jtr);
            Vector4 const trial = p + step;
            double const trial_cost = trial[3] != 0.0 ? cost(prob, trial) : std::numeric_limits<double>::infinity();
            if (std::isfinite(trial_cost) && trial_cost <= current) {
                double const relative_step =
                    (step.cwiseAbs().array() / (p.cwiseAbs().array() + 1e-12)).maxCoeff();
                double const relative_drop = current > 0.0 ? (current - trial_cost) / current : 0.0;
                p = trial;
                current = trial_cost;
                damping = std::max(damping / 10.0, 1e-12);
                stepped = true;
                if (relative_step < 1e-11 || relative_drop < 1e-14 || current < 1e-32) {
                    converged = true;
                }
            } else {
                damping *= 10.0;
                if (damping > 1e16) {
                    // No descent direction left: numerically at the minimum.
                    converged = true;
                    break;
                }
            }
        }
    }

    DipFit fit;
    fit.baseline = p[0] * y_scale;
    fit.visibility = p[1];
    fit.center_s = p[2] * x_scale + x_mid;
    fit.width_s = std::abs(p[3]) * x_scale;
    fit.iterations = iter;
    fit.converged = converged;
    fit.residual_norm = std::sqrt(2.0 * current) * y_scale;

    normal_equations(prob, p, jtj, jtr);
    if (n > 4) {
        double const variance = 2.0 * current / static_cast<double>(n - 4);
        Eigen::FullPivLU<Matrix4> lu(jtj);
        if (lu.isInvertible()) {
            Matrix4 const cov = lu.inverse() * variance;
            std::array<double, 4> const unscale{y_scale, 1.0, x_scale, x_scale};
            for (int k = 0; k < 4; ++k) {
                fit.standard_error[static_cast<std::size_t>(k)] =
                    std::sqrt(std::max(cov(k, k), 0.0)) * unscale[static_cast<std::size_t>(k)];
            }
        }
    }
    if (!converged) {
        throw FitError("Gaussian dip fit did not converge within " + std::to_string(max_iterations) +
                           " iterations",
                       fit);
    }
    return fit;
}

DipFit fit_gaussian_dip(const SweepResult& points, std::size_t column, int max_iterations)
{
    auto const x = points.column(0);
    auto const y = points.column(column);
    return fit_gaussian_dip(x, y, max_iterations);
}

}  // namespace specmux

#include "ctfa/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ctfa {

MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const OptimConfig& cfg) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;

    const auto n = x0.size();
    MinimizeResult out;
    out.x = std::move(x0);
    out.gradient = VectorXd::Zero(n);
    out.value = f(out.x, out.gradient);
    if (cfg.record_trace) out.trace.push_back(out.value);
    if (!std::isfinite(out.value)) return out;
    if (n == 0 || out.gradient.lpNorm<Eigen::Infinity>() < cfg.gtol) {
        out.converged = true;
        return out;
    }

    MatrixXd h = MatrixXd::Identity(n, n);
    VectorXd g_new(n), x_new(n);
    bool scaled = false;
    constexpr double armijo = 1e-4;
    constexpr double max_step = 5.0;

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        out.iterations = iter;
        VectorXd dir = -h * out.gradient;
        double slope = out.gradient.dot(dir);
        if (!(slope < 0.0)) {
            h.setIdentity();
            dir = -out.gradient;
            slope = -out.gradient.squaredNorm();
        }
        const double dir_norm = dir.lpNorm<Eigen::Infinity>();
        double step = dir_norm > max_step ? max_step / dir_norm : 1.0;

        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = out.x + step * dir;
            f_new = f(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= out.value + armijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted || !(f_new < out.value)) {
            // No further decrease is representable; accept only if stationary enough.
            out.converged = out.gradient.lpNorm<Eigen::Infinity>() < std::sqrt(cfg.gtol);
            return out;
        }

        const VectorXd s = x_new - out.x;
        const VectorXd y = g_new - out.gradient;
        const double f_old = out.value;
        out.x = x_new;
        out.value = f_new;
        out.gradient = g_new;
        if (cfg.record_trace) out.trace.push_back(out.value);

        if (out.gradient.lpNorm<Eigen::Infinity>() < cfg.gtol) {
            out.converged = true;
            return out;
        }
        const double scale = std::max({std::abs(f_old), std::abs(f_new), 1e-10});
        if (std::abs(f_old - f_new) <= cfg.ftol * scale) {
            out.converged = true;
            return out;
        }

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                h *= sy / y.squaredNorm();
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const VectorXd hy = h * y;
            h += ((1.0 + rho * y.dot(hy)) * rho) * (s * s.transpose()) -
                 rho * (hy * s.transpose() + s * hy.transpose());
        }
    }
    return out;
}

}  // namespace ctfa

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ctfa {

struct OptimConfig {
    double ftol = 1e-8;       // relative change in objective
    double gtol = 1e-6;       // infinity norm of the gradient
    int max_iter = 2000;
    double omega_floor = 1e-4;
    bool record_trace = false;
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // objective after each accepted step, starting at x0
};

/// Objective returning f(x) and writing the gradient; +inf marks infeasible points.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// BFGS on the inverse Hessian with a backtracking Armijo line search. Every
/// accepted step strictly decreases the objective.
MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const OptimConfig& cfg);

}  // namespace ctfa

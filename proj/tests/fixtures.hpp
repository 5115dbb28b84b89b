#pragma once

#include "ctfa/corr.hpp"
#include "ctfa/estimate.hpp"
#include "ctfa/structure.hpp"

namespace fixtures {

using namespace ctfa;

/// Two factors, variable 2 cross-loads: {0,1,2} -> F0, {2,3,4} -> F1.
inline FactorStructure shared_child_structure() {
    return FactorStructure(5, 2, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {3, 1}, {4, 1}});
}

/// Correlation entries lambda_i' Phi lambda_j evaluated with every standardised
/// loading 0.7 and phi = 0.3: within pairs 0.49 or 0.637, between pairs 0.147.
inline CorrelationMatrix shared_child_display(double loading = 0.7, double phi12 = 0.3) {
    const auto s = shared_child_structure();
    Matrix lambda = Matrix::Zero(5, 2);
    for (const auto& [i, j] : s.support()) lambda(i, j) = loading;
    Matrix phi{{1.0, phi12}, {phi12, 1.0}};
    Matrix r = lambda * phi * lambda.transpose();
    r.diagonal().setOnes();
    return CorrelationMatrix(r, CorrelationKind::Population);
}

/// A proper parameter set on the same support (raw loadings 0.7, omega 0.51).
inline FactorParams shared_child_theta() {
    FactorParams theta;
    const auto s = shared_child_structure();
    theta.loadings = Matrix::Zero(5, 2);
    for (const auto& [i, j] : s.support()) theta.loadings(i, j) = 0.7;
    theta.phi = Matrix{{1.0, 0.3}, {0.3, 1.0}};
    theta.omega = Vector::Constant(5, 0.51);
    return theta;
}

}  // namespace fixtures

#pragma once

#include <optional>
#include <vector>

#include "ctfa/corr.hpp"
#include "ctfa/optim.hpp"
#include "ctfa/structure.hpp"

namespace ctfa {

/// theta = {Lambda, Phi, Omega}; Omega is stored as its diagonal.
struct FactorParams {
    Matrix loadings;  // p x d
    Matrix phi;       // d x d, unit diagonal
    Vector omega;     // p

    int p() const { return static_cast<int>(loadings.rows()); }
    int d() const { return static_cast<int>(loadings.cols()); }

    /// Lambda Phi Lambda^T + Omega.
    Matrix covariance() const;

    /// Rescaled by D_sigma^{-1} so the implied covariance has unit diagonal.
    FactorParams standardized() const;
};

/// Sigma(theta) standardised to a correlation matrix. Throws NotPositiveDefinite.
CorrelationMatrix implied_sigma(const FactorParams& theta);

struct FitResult {
    FactorParams theta_hat;
    FactorStructure structure;
    int n = 0;
    double loglik = 0.0;
    double f_ml = 0.0;
    int n_params = 0;
    int df = 0;
    double bic = 0.0;
    std::optional<double> tli;
    std::optional<double> rmsea;
    bool converged = false;
    int iterations = 0;
    bool heywood = false;  // some error variance sits near the floor
    std::vector<double> trace;
};

/// Gaussian ML discrepancy over the free parameters of a fixed structure.
///
/// Unconstrained coordinates, in order: free loadings (support order), the
/// strictly-lower entries c_ij (i > j, row-major) of a unit-diagonal
/// lower-triangular C with Phi = D^{-1/2} C C^T D^{-1/2}, D = diag(C C^T), and
/// s_i with omega_i = floor + exp(s_i).
class MlDiscrepancy {
public:
    MlDiscrepancy(const CorrelationMatrix& target, const FactorStructure& structure,
                  double omega_floor = 1e-4);

    int size() const { return n_loadings_ + n_phi_ + p_; }
    Vector initial() const;
    FactorParams unpack(const Vector& x) const;

    /// F_ML at x; +inf where Sigma is not positive definite.
    double value(const Vector& x) const;
    double value_and_gradient(const Vector& x, Vector& grad) const;

private:
    Matrix target_;
    FactorStructure structure_;
    double floor_;
    double logdet_target_ = 0.0;
    int p_ = 0;
    int d_ = 0;
    int n_loadings_ = 0;
    int n_phi_ = 0;
};

FitResult fit_mle(const CorrelationMatrix& target, const FactorStructure& structure, int n,
                  const OptimConfig& cfg = {});

/// -2 loglik + n_params log n.
double bic(const FitResult& fit);

struct FitIndices {
    double tli = 0.0;
    double rmsea = 0.0;
};

/// Chi-square based TLI and RMSEA against the independence baseline.
/// Throws DegenerateBaseline when either model has no degrees of freedom.
FitIndices fit_indices(const FitResult& fit, const CorrelationMatrix& target);

/// Log-likelihood of standardised held-out data under the fitted covariance.
double test_loglik(const FitResult& fit, const Matrix& heldout);

/// Column-standardises data with the 1/n standard deviation.
Matrix standardize_columns(const Matrix& data);

}  // namespace ctfa

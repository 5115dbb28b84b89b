#include "ctfa/estimate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ctfa/error.hpp"

namespace ctfa {

Matrix FactorParams::covariance() const {
    Matrix sigma = loadings * phi * loadings.transpose();
    sigma.diagonal() += omega;
    return sigma;
}

FactorParams FactorParams::standardized() const {
    const Vector sd = covariance().diagonal().cwiseSqrt();
    FactorParams out = *this;
    for (int i = 0; i < p(); ++i) {
        out.loadings.row(i) /= sd(i);
        out.omega(i) /= sd(i) * sd(i);
    }
    return out;
}

CorrelationMatrix implied_sigma(const FactorParams& theta) {
    const Matrix sigma = theta.covariance();
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "implied covariance is not positive definite");
    }
    const Vector inv_sd = sigma.diagonal().cwiseSqrt().cwiseInverse();
    Matrix r = inv_sd.asDiagonal() * sigma * inv_sd.asDiagonal();
    r = 0.5 * (r + r.transpose());
    r.diagonal().setOnes();
    return CorrelationMatrix(r, CorrelationKind::Population);
}

namespace {

double log_det_pd(const Matrix& m, const char* what) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, what);
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

MlDiscrepancy::MlDiscrepancy(const CorrelationMatrix& target, const FactorStructure& structure,
                             double omega_floor)
    : target_(target.matrix()),
      structure_(structure),
      floor_(omega_floor),
      p_(structure.p()),
      d_(structure.d()),
      n_loadings_(static_cast<int>(structure.support().size())),
      n_phi_(structure.d() * (structure.d() - 1) / 2) {
    if (target.p() != structure.p()) {
        throw Error(ErrorKind::DimensionMismatch, "target and structure differ in p");
    }
    logdet_target_ = log_det_pd(target_, "target correlation matrix is not positive definite");
}

Vector MlDiscrepancy::initial() const {
    Vector x = Vector::Zero(size());
    x.head(n_loadings_).setConstant(0.5);
    x.tail(p_).setConstant(std::log(0.5 - floor_));
    return x;
}

FactorParams MlDiscrepancy::unpack(const Vector& x) const {
    FactorParams theta;
    theta.loadings = Matrix::Zero(p_, d_);
    int k = 0;
    for (const auto& [i, j] : structure_.support()) theta.loadings(i, j) = x(k++);

    Matrix c = Matrix::Identity(d_, d_);
    for (int i = 1; i < d_; ++i) {
        for (int j = 0; j < i; ++j) c(i, j) = x(k++);
    }
    const Matrix m = c * c.transpose();
    const Vector inv_sd = m.diagonal().cwiseSqrt().cwiseInverse();
    theta.phi = inv_sd.asDiagonal() * m * inv_sd.asDiagonal();
    theta.phi.diagonal().setOnes();

    theta.omega = x.tail(p_).array().exp() + floor_;
    return theta;
}

double MlDiscrepancy::value(const Vector& x) const {
    Vector unused(size());
    return value_and_gradient(x, unused);
}

double MlDiscrepancy::value_and_gradient(const Vector& x, Vector& grad) const {
    grad.setZero(size());
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();

    // Rebuild the pieces of unpack() that the chain rule needs.
    Matrix lambda = Matrix::Zero(p_, d_);
    int k = 0;
    for (const auto& [i, j] : structure_.support()) lambda(i, j) = x(k++);
    Matrix c = Matrix::Identity(d_, d_);
    for (int i = 1; i < d_; ++i) {
        for (int j = 0; j < i; ++j) c(i, j) = x(k++);
    }
    const Matrix m = c * c.transpose();
    const Vector delta = m.diagonal();
    const Vector dg = delta.cwiseSqrt().cwiseInverse();
    const Matrix phi = dg.asDiagonal() * m * dg.asDiagonal();
    const Vector e = x.tail(p_).array().exp();
    const Vector omega = e.array() + floor_;

    Matrix sigma = lambda * phi * lambda.transpose();
    sigma.diagonal() += omega;
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const Matrix inv = llt.solve(Matrix::Identity(p_, p_));
    const double f = logdet + target_.cwiseProduct(inv).sum() - logdet_target_ - p_;
    if (!std::isfinite(f)) return std::numeric_limits<double>::infinity();

    // dF = tr(W dSigma), W = Sigma^{-1} (Sigma - S) Sigma^{-1}.
    const Matrix w = inv - inv * target_ * inv;

    const Matrix g_lambda = 2.0 * w * lambda * phi;
    k = 0;
    for (const auto& [i, j] : structure_.support()) grad(k++) = g_lambda(i, j);

    if (d_ > 1) {
        const Matrix g_phi = lambda.transpose() * w * lambda;
        Matrix h = dg.asDiagonal() * g_phi * dg.asDiagonal();
        const Matrix gdm = g_phi * dg.asDiagonal() * m;
        for (int i = 0; i < d_; ++i) h(i, i) -= gdm(i, i) / (delta(i) * std::sqrt(delta(i)));
        const Matrix g_c = 2.0 * h * c;
        for (int i = 1; i < d_; ++i) {
            for (int j = 0; j < i; ++j) grad(k++) = g_c(i, j);
        }
    }

    grad.tail(p_) = w.diagonal().cwiseProduct(e);
    return f;
}

FitResult fit_mle(const CorrelationMatrix& target, const FactorStructure& structure, int n,
                  const OptimConfig& cfg) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "sample size must be at least 2");
    const MlDiscrepancy objective(target, structure, cfg.omega_floor);
    const auto result = minimize_bfgs(
        [&](const Vector& x, Vector& g) { return objective.value_and_gradient(x, g); },
        objective.initial(), cfg);

    FitResult fit;
    fit.structure = structure;
    fit.n = n;
    fit.theta_hat = objective.unpack(result.x);
    fit.f_ml = result.value;
    fit.converged = result.converged;
    fit.iterations = result.iterations;
    fit.trace = result.trace;

    // Sign convention: the largest-magnitude loading of every factor is positive.
    auto& theta = fit.theta_hat;
    for (int j = 0; j < theta.d(); ++j) {
        Eigen::Index arg = 0;
        theta.loadings.col(j).cwiseAbs().maxCoeff(&arg);
        if (theta.loadings(arg, j) < 0.0) {
            theta.loadings.col(j) *= -1.0;
            theta.phi.row(j) *= -1.0;
            theta.phi.col(j) *= -1.0;
        }
    }
    fit.heywood = theta.omega.size() > 0 && theta.omega.minCoeff() < 10.0 * cfg.omega_floor;

    const int p = structure.p();
    const int d = structure.d();
    fit.n_params = static_cast<int>(structure.support().size()) + d * (d - 1) / 2 + p;
    fit.df = p * (p + 1) / 2 - fit.n_params;

    const Matrix sigma = theta.covariance();
    Eigen::LLT<Matrix> llt(sigma);
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double trace = target.matrix().cwiseProduct(llt.solve(Matrix::Identity(p, p))).sum();
    fit.loglik = -0.5 * n * (logdet + trace + p * std::log(2.0 * std::numbers::pi));
    fit.bic = bic(fit);
    try {
        const auto indices = fit_indices(fit, target);
        fit.tli = indices.tli;
        fit.rmsea = indices.rmsea;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateBaseline) throw;
    }
    return fit;
}

double bic(const FitResult& fit) {
    return -2.0 * fit.loglik + fit.n_params * std::log(static_cast<double>(fit.n));
}

FitIndices fit_indices(const FitResult& fit, const CorrelationMatrix& target) {
    const int p = target.p();
    const int df_base = p * (p - 1) / 2;
    if (df_base == 0 || fit.df <= 0) {
        throw Error(ErrorKind::DegenerateBaseline, "model or baseline has no degrees of freedom");
    }
    const double scale = fit.n - 1.0;
    const double chi2 = scale * std::max(fit.f_ml, 0.0);
    // Independence model on a unit-diagonal target: F_ML = -log|S|.
    const double chi2_base = scale * -log_det_pd(target.matrix(), "target is not positive definite");
    const double base_ratio = chi2_base / df_base;
    if (base_ratio == 1.0) {
        throw Error(ErrorKind::DegenerateBaseline, "baseline chi-square equals its df");
    }
    FitIndices out;
    out.tli = (base_ratio - chi2 / fit.df) / (base_ratio - 1.0);
    out.rmsea = std::sqrt(std::max(chi2 - fit.df, 0.0) / (fit.df * scale));
    return out;
}

Matrix standardize_columns(const Matrix& data) {
    const auto n = data.rows();
    Matrix z = data.rowwise() - data.colwise().mean();
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
        if (sd == 0.0 || !std::isfinite(sd)) {
            throw Error(ErrorKind::ZeroVarianceColumn, "column " + std::to_string(j));
        }
        z.col(j) /= sd;
    }
    return z;
}

double test_loglik(const FitResult& fit, const Matrix& heldout) {
    const int p = fit.structure.p();
    if (heldout.cols() != p) {
        throw Error(ErrorKind::DimensionMismatch, "held-out data has the wrong column count");
    }
    if (heldout.rows() < 2) throw Error(ErrorKind::DimensionError, "need at least 2 observations");
    const Matrix z = standardize_columns(heldout);
    const Matrix sigma = fit.theta_hat.covariance();
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "fitted covariance is not positive definite");
    }
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const Matrix solved = llt.matrixL().solve(z.transpose());
    const double quad = solved.squaredNorm();
    const double n = static_cast<double>(heldout.rows());
    return -0.5 * quad - 0.5 * n * (logdet + p * std::log(2.0 * std::numbers::pi));
}

}  // namespace ctfa

#ifndef FASTICA_ESTIMATORS_HPP
#define FASTICA_ESTIMATORS_HPP

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "fastica/nonlinearity.hpp"

namespace fastica {

enum class Method { defl, sym, sym2 };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Observed data, rows = components, columns = observations.
class DataMatrix {
public:
    // Requires p >= 2, n > p, finite entries.
    explicit DataMatrix(Eigen::MatrixXd X);

    const Eigen::MatrixXd& X() const { return X_; }
    Eigen::Index p() const { return X_.rows(); }
    Eigen::Index n() const { return X_.cols(); }

private:
    Eigen::MatrixXd X_;
};

struct WhiteningResult {
    Eigen::VectorXd mean;
    Eigen::MatrixXd S;           // sample covariance, divisor n
    Eigen::MatrixXd S_inv_sqrt;  // symmetric
    Eigen::MatrixXd S_sqrt;      // symmetric
    Eigen::MatrixXd Z_st;        // p x n, identity sample covariance
};

// Symmetric whitening via eigendecomposition of the sample covariance.
// Throws singular_covariance_error when an eigenvalue falls below
// 1e-12 times the largest one.
WhiteningResult whiten(const DataMatrix& data);

struct EstimatorOptions {
    double tol = 1e-9;
    int max_iter = 2000;
};

struct UnmixingEstimate {
    Eigen::MatrixXd Gamma;  // U * S^{-1/2}, rows flipped so the largest-
                            // magnitude entry of each is positive
    Eigen::MatrixXd U;      // orthogonal rotation, same row signs as Gamma
    Method method = Method::defl;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;  // max estimating-equation + constraint violation
};

struct InitialRotation {
    Eigen::MatrixXd U0;
    // True when the preliminary estimate failed and a seeded random
    // orthogonal matrix was substituted.
    bool fallback = false;
};

// Data-driven deterministic start for the deflation estimator: a preliminary
// squared-symmetric pow3 estimate, its rows reordered by decreasing |mean G|
// of the extracted components, mapped back to a rotation and re-orthogonalized
// through the symmetric square root of its Gram matrix.
InitialRotation initial_rotation(const DataMatrix& data, const Nonlinearity& nl,
                                 std::uint64_t seed);

// One component at a time: fixed-point update, Gram-Schmidt deflation against
// the rows already found, normalization. A component that fails to converge is
// restarted once from a seeded random direction; if it still fails the
// estimate is returned with converged = false.
UnmixingEstimate deflation_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                   const Eigen::MatrixXd& U0,
                                   const EstimatorOptions& opts = {});

// All rows at once, re-orthogonalized through (T T^t)^{-1/2} T each sweep.
UnmixingEstimate symmetric_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                   const Eigen::MatrixXd& U0,
                                   const EstimatorOptions& opts = {});

// Symmetric iteration with each row of T weighted by mean[G(u_j^t z)], which
// steers the rotation by signed component nongaussianity.
UnmixingEstimate squared_symmetric_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                           const Eigen::MatrixXd& U0,
                                           const EstimatorOptions& opts = {});

UnmixingEstimate estimate(const DataMatrix& data, const Nonlinearity& nl, Method method,
                          const Eigen::MatrixXd& U0, const EstimatorOptions& opts = {});

// Recomputes the reported residual from scratch: the method's estimating
// equations evaluated at the estimate plus max |Gamma S Gamma^t - I|.
double estimating_residual(const UnmixingEstimate& est, const DataMatrix& data,
                           const Nonlinearity& nl);

namespace detail {

// Orthogonal polar factor (M M^t)^{-1/2} M via SVD. Throws
// degenerate_data_error when the smallest singular value is below 1e-14.
Eigen::MatrixXd polar_orthogonal(const Eigen::MatrixXd& M, const char* who);

} // namespace detail

} // namespace fastica

#endif

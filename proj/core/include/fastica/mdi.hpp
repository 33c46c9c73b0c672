#ifndef FASTICA_MDI_HPP
#define FASTICA_MDI_HPP

#include <cstddef>

#include <Eigen/Dense>

namespace fastica {

// Minimum distance index in [0, 1]:
//
//   D = (p-1)^{-1/2} inf_C  || C Gamma_hat Omega - I ||_F
//
// over matrices C with exactly one nonzero entry per row and column, so D = 0
// exactly when Gamma_hat recovers Omega^{-1} up to signed scaled row
// permutation. The infimum is exact: the best scale for matching row j of
// G = Gamma_hat Omega to the i-th identity row is a one-dimensional least
// squares with gain G_ji^2/||G_j||^2, and the row-to-row matching becomes a
// linear assignment problem solved with shortest augmenting paths.
double minimum_distance_index(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega);

// Same quantity by enumerating all p! row assignments and evaluating each
// residual norm directly; p <= 7. Kept as an oracle for the reduction above.
double mdi_bruteforce(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega);

// n (p-1) D^2, the statistic whose mean over replicates approaches the summed
// off-diagonal asymptotic variances.
double scaled_mdi_statistic(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega,
                            std::size_t n);

} // namespace fastica

#endif

#include "fastica/mdi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fastica {

namespace {

void check_shapes(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega) {
    if (Gamma_hat.rows() != Gamma_hat.cols() || Omega.rows() != Omega.cols() ||
        Gamma_hat.rows() != Omega.rows())
        throw std::invalid_argument("matrices must be square and of equal size");
    if (Gamma_hat.rows() < 2) throw std::invalid_argument("dimension must be at least 2");
}

// score(j, i) = G_ji^2 / ||G_j||^2, the gain from matching row j of the gain
// matrix to identity row i with its optimal scale.
Eigen::MatrixXd score_matrix(const Eigen::MatrixXd& G) {
    const Eigen::Index p = G.rows();
    Eigen::MatrixXd score(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double norm2 = G.row(j).squaredNorm();
        if (norm2 < 1e-300)
            score.row(j).setZero();
        else
            score.row(j) = G.row(j).array().square() / norm2;
    }
    return score;
}

// Minimum-cost perfect matching via shortest augmenting paths with potentials;
// returns the optimal total cost. Rows and columns are 1-indexed internally.
double assignment_cost(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
    return total;
}

} // namespace

double minimum_distance_index(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega) {
    check_shapes(Gamma_hat, Omega);
    const Eigen::MatrixXd G = Gamma_hat * Omega;
    const Eigen::Index p = G.rows();
    const double best = -assignment_cost(-score_matrix(G));
    const double d2 = (static_cast<double>(p) - best) / static_cast<double>(p - 1);
    return std::sqrt(std::max(0.0, d2));
}

double mdi_bruteforce(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega) {
    check_shapes(Gamma_hat, Omega);
    if (Gamma_hat.rows() > 7)
        throw std::invalid_argument("brute force enumeration is limited to dimension 7");
    const Eigen::MatrixXd G = Gamma_hat * Omega;
    const Eigen::Index p = G.rows();

    std::vector<int> perm(static_cast<std::size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        // perm[i] = row of G matched to identity row i; each row gets its own
        // closed-form least-squares scale and the residual is evaluated
        // directly so this path is independent of the score reduction.
        double total = 0.0;
        for (Eigen::Index i = 0; i < p; ++i) {
            const auto row = G.row(perm[static_cast<std::size_t>(i)]);
            const double norm2 = row.squaredNorm();
            const double c = norm2 < 1e-300 ? 0.0 : row(i) / norm2;
            Eigen::RowVectorXd r = c * row;
            r(i) -= 1.0;
            total += r.squaredNorm();
        }
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return std::sqrt(std::max(0.0, best / static_cast<double>(p - 1)));
}

double scaled_mdi_statistic(const Eigen::MatrixXd& Gamma_hat, const Eigen::MatrixXd& Omega,
                            std::size_t n) {
    const double d = minimum_distance_index(Gamma_hat, Omega);
    return static_cast<double>(n) * static_cast<double>(Gamma_hat.rows() - 1) * d * d;
}

} // namespace fastica

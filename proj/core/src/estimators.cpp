#include "fastica/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fastica/errors.hpp"
#include "fastica/rng.hpp"

namespace fastica {

std::string method_name(Method m) {
    switch (m) {
        case Method::defl: return "defl";
        case Method::sym: return "sym";
        case Method::sym2: return "sym2";
    }
    return {};
}

Method parse_method(const std::string& name) {
    if (name == "defl") return Method::defl;
    if (name == "sym") return Method::sym;
    if (name == "sym2") return Method::sym2;
    throw std::invalid_argument("unknown method '" + name + "' (expected defl, sym, sym2)");
}

DataMatrix::DataMatrix(Eigen::MatrixXd X) : X_(std::move(X)) {
    if (X_.rows() < 2)
        throw std::invalid_argument("data must have at least 2 rows (components)");
    if (X_.cols() <= X_.rows())
        throw std::invalid_argument("data must have more observations than components");
    if (!X_.allFinite()) throw std::invalid_argument("data contains non-finite entries");
}

WhiteningResult whiten(const DataMatrix& data) {
    const auto& X = data.X();
    const Eigen::Index p = data.p();
    const double n = static_cast<double>(data.n());

    WhiteningResult w;
    w.mean = X.rowwise().mean();
    const Eigen::MatrixXd Xc = X.colwise() - w.mean;
    w.S = (Xc * Xc.transpose()) / n;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.S);
    if (es.info() != Eigen::Success)
        throw singular_covariance_error("eigendecomposition of sample covariance failed");
    const Eigen::VectorXd& d = es.eigenvalues();
    const double d_max = d(p - 1);
    if (!(d_max > 0.0) || d(0) < 1e-12 * d_max)
        throw singular_covariance_error("sample covariance is numerically singular");

    const Eigen::MatrixXd& V = es.eigenvectors();
    w.S_inv_sqrt = V * d.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    w.S_sqrt = V * d.cwiseSqrt().asDiagonal() * V.transpose();
    w.Z_st = w.S_inv_sqrt * Xc;
    return w;
}

namespace detail {

Eigen::MatrixXd polar_orthogonal(const Eigen::MatrixXd& M, const char* who) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(M.rows() - 1) < 1e-14)
        throw degenerate_data_error(std::string(who) + ": update stack is numerically singular");
    return svd.matrixU() * svd.matrixV().transpose();
}

} // namespace detail

namespace {

// mean[g(u^t z) z] - mean[g'(u^t z)] u on whitened columns of Z.
Eigen::VectorXd t_star(const Eigen::MatrixXd& Z, const Nonlinearity& nl,
                       const Eigen::VectorXd& u) {
    const Eigen::ArrayXd y = (Z.transpose() * u).array();
    const double n = static_cast<double>(Z.cols());
    return (Z * nl.g(y).matrix()) / n - nl.gprime(y).mean() * u;
}

double mean_G(const Eigen::MatrixXd& Z, const Nonlinearity& nl, const Eigen::VectorXd& u) {
    return nl.G(Eigen::ArrayXd((Z.transpose() * u).array())).mean();
}

double residual_impl(const Eigen::MatrixXd& U, const Eigen::MatrixXd& Gamma,
                     const WhiteningResult& w, const Nonlinearity& nl, Method method) {
    const Eigen::Index p = U.rows();
    Eigen::MatrixXd T(p, p);
    Eigen::VectorXd nu(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const Eigen::VectorXd u = U.row(j).transpose();
        T.row(j) = t_star(w.Z_st, nl, u).transpose();
        nu(j) = mean_G(w.Z_st, nl, u);
    }

    double r = 0.0;
    switch (method) {
        case Method::defl: {
            for (Eigen::Index j = 0; j < p; ++j) {
                Eigen::VectorXd t = T.row(j).transpose();
                for (Eigen::Index l = 0; l <= j; ++l) {
                    const Eigen::VectorXd ul = U.row(l).transpose();
                    t -= ul * (ul.dot(t));
                }
                r = std::max(r, t.cwiseAbs().maxCoeff());
            }
            break;
        }
        case Method::sym: {
            for (Eigen::Index j = 0; j < p; ++j) {
                const double sj = std::abs(nu(j)) < 1e-10 ? 0.0 : (nu(j) > 0 ? 1.0 : -1.0);
                for (Eigen::Index l = j + 1; l < p; ++l) {
                    const double sl = std::abs(nu(l)) < 1e-10 ? 0.0 : (nu(l) > 0 ? 1.0 : -1.0);
                    const double lhs = U.row(l).dot(T.row(j)) * sj;
                    const double rhs = U.row(j).dot(T.row(l)) * sl;
                    r = std::max(r, std::abs(lhs - rhs));
                }
            }
            break;
        }
        case Method::sym2: {
            for (Eigen::Index j = 0; j < p; ++j)
                for (Eigen::Index l = j + 1; l < p; ++l) {
                    const double lhs = nu(j) * U.row(l).dot(T.row(j));
                    const double rhs = nu(l) * U.row(j).dot(T.row(l));
                    r = std::max(r, std::abs(lhs - rhs));
                }
            break;
        }
    }

    const Eigen::MatrixXd C = Gamma * w.S * Gamma.transpose() -
                              Eigen::MatrixXd::Identity(p, p);
    return std::max(r, C.cwiseAbs().maxCoeff());
}

// Flip each row of Gamma (and the matching row of U) so its largest-magnitude
// entry is positive.
void fix_row_signs(Eigen::MatrixXd& U, Eigen::MatrixXd& Gamma) {
    for (Eigen::Index j = 0; j < Gamma.rows(); ++j) {
        Eigen::Index k;
        Gamma.row(j).cwiseAbs().maxCoeff(&k);
        if (Gamma(j, k) < 0.0) {
            Gamma.row(j) = -Gamma.row(j);
            U.row(j) = -U.row(j);
        }
    }
}

UnmixingEstimate finish(Method method, Eigen::MatrixXd U, const WhiteningResult& w,
                        const Nonlinearity& nl, int iterations, bool converged) {
    UnmixingEstimate est;
    est.method = method;
    est.iterations = iterations;
    est.converged = converged;
    est.Gamma = U * w.S_inv_sqrt;
    est.U = std::move(U);
    fix_row_signs(est.U, est.Gamma);
    est.residual = residual_impl(est.U, est.Gamma, w, nl, method);
    return est;
}

void check_start(const Eigen::MatrixXd& U0, Eigen::Index p) {
    if (U0.rows() != p || U0.cols() != p)
        throw std::invalid_argument("initial rotation has wrong dimensions");
    const double dev =
        (U0 * U0.transpose() - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff();
    if (dev > 1e-8) throw std::invalid_argument("initial rotation is not orthogonal");
}

} // namespace

UnmixingEstimate deflation_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                   const Eigen::MatrixXd& U0, const EstimatorOptions& opts) {
    const Eigen::Index p = data.p();
    check_start(U0, p);
    const WhiteningResult w = whiten(data);

    auto project = [&](Eigen::VectorXd v, const Eigen::MatrixXd& U, Eigen::Index rows) {
        for (Eigen::Index l = 0; l < rows; ++l) {
            const Eigen::VectorXd ul = U.row(l).transpose();
            v -= ul * ul.dot(v);
        }
        return v;
    };

    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(p, p);
    int total_iters = 0;
    bool all_converged = true;

    for (Eigen::Index j = 0; j < p; ++j) {
        bool comp_converged = false;
        Eigen::VectorXd u = project(U0.row(j).transpose(), U, j);
        if (u.norm() < 1e-14) u = Eigen::VectorXd::Unit(p, j % p);
        u.normalize();

        for (int attempt = 0; attempt < 2 && !comp_converged; ++attempt) {
            if (attempt == 1) {
                Rng restart(mix_seed(0xdef1a7e5ULL, static_cast<std::uint64_t>(j)));
                Eigen::VectorXd v(p);
                for (Eigen::Index i = 0; i < p; ++i) v(i) = restart.normal();
                v = project(v, U, j);
                if (v.norm() < 1e-14)
                    throw degenerate_data_error("deflation: no direction left to restart from");
                u = v.normalized();
            }
            for (int it = 0; it < opts.max_iter; ++it) {
                ++total_iters;
                Eigen::VectorXd t = t_star(w.Z_st, nl, u);
                if (t.norm() < 1e-14)
                    throw degenerate_data_error("deflation: update vector vanished");
                t = project(std::move(t), U, j);
                const double nrm = t.norm();
                if (nrm < 1e-14)
                    throw degenerate_data_error(
                        "deflation: update lies in the span of found components");
                t /= nrm;
                const double dist = std::min((t - u).norm(), (t + u).norm());
                u = t;
                if (dist < opts.tol) {
                    comp_converged = true;
                    break;
                }
            }
        }
        U.row(j) = u.transpose();
        all_converged = all_converged && comp_converged;
    }

    return finish(Method::defl, std::move(U), w, nl, total_iters, all_converged);
}

namespace {

UnmixingEstimate symmetric_core(const DataMatrix& data, const Nonlinearity& nl,
                                const Eigen::MatrixXd& U0, const EstimatorOptions& opts,
                                bool squared) {
    const Eigen::Index p = data.p();
    check_start(U0, p);
    const WhiteningResult w = whiten(data);
    const char* who = squared ? "squared symmetric" : "symmetric";

    Eigen::MatrixXd U = U0;
    Eigen::MatrixXd T(p, p);
    int iters = 0;
    bool converged = false;

    while (iters < opts.max_iter && !converged) {
        ++iters;
        double max_weight = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const Eigen::VectorXd u = U.row(j).transpose();
            Eigen::VectorXd t = t_star(w.Z_st, nl, u);
            if (squared) {
                const double nu = mean_G(w.Z_st, nl, u);
                max_weight = std::max(max_weight, std::abs(nu));
                t *= nu;
            }
            T.row(j) = t.transpose();
        }
        if (squared && max_weight < 1e-12)
            throw degenerate_data_error(
                "squared symmetric: every component looks Gaussian under G");

        const Eigen::MatrixXd U_new = detail::polar_orthogonal(T, who);
        double min_align = 1.0;
        for (Eigen::Index j = 0; j < p; ++j)
            min_align = std::min(min_align, std::abs(U_new.row(j).dot(U.row(j))));
        U = U_new;
        if (1.0 - min_align < opts.tol) converged = true;
    }

    return finish(squared ? Method::sym2 : Method::sym, std::move(U), w, nl, iters, converged);
}

} // namespace

UnmixingEstimate symmetric_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                   const Eigen::MatrixXd& U0, const EstimatorOptions& opts) {
    return symmetric_core(data, nl, U0, opts, false);
}

UnmixingEstimate squared_symmetric_fastica(const DataMatrix& data, const Nonlinearity& nl,
                                           const Eigen::MatrixXd& U0,
                                           const EstimatorOptions& opts) {
    return symmetric_core(data, nl, U0, opts, true);
}

UnmixingEstimate estimate(const DataMatrix& data, const Nonlinearity& nl, Method method,
                          const Eigen::MatrixXd& U0, const EstimatorOptions& opts) {
    switch (method) {
        case Method::defl: return deflation_fastica(data, nl, U0, opts);
        case Method::sym: return symmetric_fastica(data, nl, U0, opts);
        case Method::sym2: return squared_symmetric_fastica(data, nl, U0, opts);
    }
    throw std::logic_error("unreachable method");
}

double estimating_residual(const UnmixingEstimate& est, const DataMatrix& data,
                           const Nonlinearity& nl) {
    const WhiteningResult w = whiten(data);
    return residual_impl(est.U, est.Gamma, w, nl, est.method);
}

InitialRotation initial_rotation(const DataMatrix& data, const Nonlinearity& nl,
                                 std::uint64_t seed) {
    const WhiteningResult w = whiten(data);
    const Eigen::Index p = data.p();
    Rng rng(seed);
    const Eigen::MatrixXd U_pre = random_orthogonal(static_cast<int>(p), rng);

    Eigen::MatrixXd Gamma0;
    bool ok = false;
    try {
        const auto pre =
            squared_symmetric_fastica(data, Nonlinearity::make(NlKind::pow3), U_pre, {});
        if (pre.converged) {
            Gamma0 = pre.Gamma;
            ok = true;
        }
    } catch (const std::exception&) {
    }
    if (!ok) return {random_orthogonal(static_cast<int>(p), rng), true};

    const Eigen::MatrixXd Y = Gamma0 * (data.X().colwise() - w.mean);
    std::vector<std::pair<double, Eigen::Index>> order;
    order.reserve(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const double m = nl.G(Eigen::ArrayXd(Y.row(j).transpose().array())).mean();
        order.emplace_back(std::abs(m), j);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    Eigen::MatrixXd M(p, p);
    for (Eigen::Index r = 0; r < p; ++r) M.row(r) = Gamma0.row(order[r].second) * w.S_sqrt;
    return {detail::polar_orthogonal(M, "initial rotation"), false};
}

} // namespace fastica

#include "fastica/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fastica/errors.hpp"

namespace fastica {

namespace {

GaussHermiteRule build_gauss_hermite(int n) {
    // Jacobi matrix of the (probabilists') Hermite polynomials: zero diagonal,
    // off-diagonal sqrt(k). Eigenvalues are the nodes, weights come from the
    // first eigenvector components (total mass 1).
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(static_cast<double>(k));
        j(k, k - 1) = b;
        j(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    GaussHermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        const double v = es.eigenvectors()(0, k);
        rule.weights[k] = v * v;
    }
    return rule;
}

} // namespace

const GaussHermiteRule& gauss_hermite(int n) {
    switch (n) {
        case 20: { static const GaussHermiteRule r = build_gauss_hermite(20); return r; }
        case 40: { static const GaussHermiteRule r = build_gauss_hermite(40); return r; }
        case 80: { static const GaussHermiteRule r = build_gauss_hermite(80); return r; }
        case 160: { static const GaussHermiteRule r = build_gauss_hermite(160); return r; }
        case 320: { static const GaussHermiteRule r = build_gauss_hermite(320); return r; }
        case 640: { static const GaussHermiteRule r = build_gauss_hermite(640); return r; }
        default: throw std::invalid_argument("gauss_hermite: unsupported rule size");
    }
}

double normal_expect(const std::function<double(double)>& h, double mu, double sigma,
                     double abs_tol) {
    double prev = 0.0;
    bool have_prev = false;
    for (int n : {20, 40, 80, 160, 320, 640}) {
        const GaussHermiteRule& rule = gauss_hermite(n);
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += rule.weights[k] * h(mu + sigma * rule.nodes[k]);
        if (have_prev && std::abs(acc - prev) <= abs_tol) return acc;
        prev = acc;
        have_prev = true;
    }
    std::ostringstream msg;
    msg << "normal_expect: Gauss-Hermite ladder did not converge to " << abs_tol
        << " (mu=" << mu << ", sigma=" << sigma << ", last=" << prev << ")";
    throw quadrature_error(msg.str());
}

double integrate_kronrod(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, const char* what) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    const double v = gk::integrate(f, a, b, 15, 1e-12, &err);
    // Large-magnitude integrals cannot beat machine precision in absolute
    // terms, so the target gets a relative floor.
    const double target = abs_tol + 1e-14 * std::abs(v);
    if (!std::isfinite(v) || err > target) {
        std::ostringstream msg;
        msg << what << ": adaptive Gauss-Kronrod failed on [" << a << ", " << b
            << "], value=" << v << ", error estimate=" << err << ", target=" << abs_tol;
        throw quadrature_error(msg.str());
    }
    return v;
}

} // namespace fastica

#ifndef FASTICA_QUADRATURE_HPP
#define FASTICA_QUADRATURE_HPP

#include <functional>

#include <Eigen/Dense>

namespace fastica {

// Probabilists' Gauss-Hermite rule: E_{N(0,1)}[h] ~ sum_i w_i h(x_i).
// Rules are built by Golub-Welsch and cached; n must be one of
// 20, 40, 80, 160, 320, 640.
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};
const GaussHermiteRule& gauss_hermite(int n);

// E[h(Z)] for Z ~ N(mu, sigma^2), Gauss-Hermite with node doubling until two
// consecutive rules agree within abs_tol. Throws quadrature_error otherwise.
double normal_expect(const std::function<double(double)>& h, double mu, double sigma,
                     double abs_tol = 1e-10);

// Adaptive Gauss-Kronrod (G7/K15) on a finite interval with an absolute
// error target. `what` tags the quadrature_error diagnostic on failure.
double integrate_kronrod(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, const char* what);

} // namespace fastica

#endif

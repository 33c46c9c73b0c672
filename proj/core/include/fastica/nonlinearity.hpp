#ifndef FASTICA_NONLINEARITY_HPP
#define FASTICA_NONLINEARITY_HPP

#include <string>

#include <Eigen/Dense>

namespace fastica {

enum class NlKind { pow3, skew, tanh_lc, gaus };

// Twice-differentiable contrast G with derivative g and second derivative g'.
// G is centered so that E[G(Z)] = 0 for Z ~ N(0,1):
//
//   pow3:  G(z) = z^4/4 - 3/4          g = z^3           g' = 3 z^2
//   skew:  G(z) = z^3/3                g = z^2           g' = 2 z
//   tanh:  G(z) = log cosh(a z)/a - c  g = tanh(a z)     g' = a (1 - tanh^2(a z))
//   gaus:  G(z) = -exp(-a z^2/2)/a - c g = z exp(-a z^2/2)
//                                      g' = (1 - a z^2) exp(-a z^2/2)
//
// The tanh offset c is computed by quadrature at construction; the gaus
// offset is -1/(a sqrt(1 + a)) in closed form.
class Nonlinearity {
public:
    // a tunes tanh and gaus and must be positive; pow3 and skew ignore it.
    static Nonlinearity make(NlKind kind, double a = 1.0);

    NlKind kind() const { return kind_; }
    double a() const { return a_; }
    // E[G_uncentered(Z)], Z ~ N(0,1); the constant subtracted by G().
    double gaussian_mean() const { return center_; }
    std::string name() const;

    double G(double z) const;
    double g(double z) const;
    double gprime(double z) const;

    Eigen::ArrayXd G(const Eigen::ArrayXd& z) const;
    Eigen::ArrayXd g(const Eigen::ArrayXd& z) const;
    Eigen::ArrayXd gprime(const Eigen::ArrayXd& z) const;

private:
    Nonlinearity(NlKind kind, double a, double center) : kind_(kind), a_(a), center_(center) {}

    NlKind kind_;
    double a_;
    double center_;
};

// Overflow-safe log(cosh(t)).
double log_cosh(double t);

NlKind parse_nl_kind(const std::string& name);

} // namespace fastica

#endif

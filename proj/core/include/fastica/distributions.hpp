#ifndef FASTICA_DISTRIBUTIONS_HPP
#define FASTICA_DISTRIBUTIONS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fastica {

enum class DistKind { exp_power, gamma_std, gauss_mix4, uniform, std_normal };

struct MixComponent {
    double weight;
    double mean;
    double var;
};

// Univariate source distributions, all standardized to mean 0, variance 1.
//
//   exp_power(beta):  f(x) = beta exp{-(|x|/alpha)^beta} / (2 alpha Gamma(1/beta)),
//                     alpha = sqrt(Gamma(1/beta)/Gamma(3/beta)).
//                     beta=1 Laplace, beta=2 normal, beta -> inf uniform.
//   gamma_std(alpha): Gamma(alpha, 1) shifted/scaled to zero mean, unit
//                     variance; support (-sqrt(alpha), inf).
//   gauss_mix4:       four-component Gaussian mixture; raw parameters are
//                     re-standardized exactly on construction.
//   uniform:          uniform on (-sqrt(3), sqrt(3)) (the beta -> inf
//                     exponential power limit, kept exact).
//   std_normal:       N(0, 1).
class SourceDistribution {
public:
    static SourceDistribution exp_power(double beta);
    static SourceDistribution gamma_std(double alpha);
    // Weights may be off by rounding (|sum - 1| <= 0.02) and are renormalized.
    static SourceDistribution gauss_mix4(const std::array<MixComponent, 4>& raw);
    static SourceDistribution uniform();
    static SourceDistribution std_normal();

    DistKind kind() const { return kind_; }
    // beta for exp_power, alpha for gamma_std.
    double shape() const { return shape_; }
    // Standardized components; one component (1,0,1) for std_normal.
    const std::vector<MixComponent>& components() const { return comps_; }

    double density(double x) const;

    // Adaptive expectation E[h(Z)] to an absolute tolerance. Gauss-Kronrod on
    // (transformed) finite supports for exp_power/gamma_std/uniform,
    // weight-summed Gauss-Hermite for mixtures and the normal.
    double expect(const std::function<double(double)>& h, double abs_tol = 1e-9) const;

    // n i.i.d. draws; identical seeds give identical vectors.
    Eigen::VectorXd sample(std::size_t n, std::uint64_t seed) const;

    // Round-trips through parse_dist_spec; mixtures serialize inline.
    std::string spec() const;

private:
    SourceDistribution() = default;

    DistKind kind_ = DistKind::std_normal;
    double shape_ = 0.0;
    double ep_alpha_ = 0.0;                // exp_power scale
    double ep_lognorm_ = 0.0;              // log(beta / (2 alpha Gamma(1/beta)))
    std::vector<MixComponent> comps_;      // standardized (mixtures, normal)
    std::array<MixComponent, 4> raw_{};    // as given, for spec() round-trip
};

// "ep:<beta>", "gamma:<alpha>", "normal", "uniform",
// "mix4:<path>" (4 text rows "pi mu sigma2") or inline
// "mix4:pi,mu,s2|pi,mu,s2|pi,mu,s2|pi,mu,s2".
SourceDistribution parse_dist_spec(const std::string& spec);

} // namespace fastica

#endif

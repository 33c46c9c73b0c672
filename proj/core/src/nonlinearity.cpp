#include "fastica/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

#include "fastica/errors.hpp"
#include "fastica/quadrature.hpp"

namespace fastica {

double log_cosh(double t) {
    const double at = std::abs(t);
    return at - M_LN2 + std::log1p(std::exp(-2.0 * at));
}

Nonlinearity Nonlinearity::make(NlKind kind, double a) {
    switch (kind) {
        case NlKind::pow3:
            return Nonlinearity(kind, 1.0, 0.75);
        case NlKind::skew:
            return Nonlinearity(kind, 1.0, 0.0);
        case NlKind::tanh_lc: {
            if (!(a > 0.0)) throw std::invalid_argument("tanh: a must be positive");
            double c;
            try {
                c = normal_expect([a](double z) { return log_cosh(a * z) / a; }, 0.0, 1.0,
                                  1e-12);
            } catch (const quadrature_error&) {
                // The poles of log cosh at +-i pi/(2a) stall the Hermite
                // ladder once a grows past ~2.4. Split off E|Z| = sqrt(2/pi)
                // exactly and integrate the smooth remainder on the half line.
                const double tail = integrate_kronrod(
                    [a](double z) {
                        return std::log1p(std::exp(-2.0 * a * z)) * std::exp(-0.5 * z * z);
                    },
                    0.0, 60.0, 1e-12 * a, "tanh centering");
                c = std::sqrt(2.0 / M_PI) - M_LN2 / a +
                    tail * 2.0 / (a * std::sqrt(2.0 * M_PI));
            }
            return Nonlinearity(kind, a, c);
        }
        case NlKind::gaus: {
            if (!(a > 0.0)) throw std::invalid_argument("gaus: a must be positive");
            return Nonlinearity(kind, a, -1.0 / (a * std::sqrt(1.0 + a)));
        }
    }
    throw std::logic_error("unreachable nonlinearity kind");
}

std::string Nonlinearity::name() const {
    switch (kind_) {
        case NlKind::pow3: return "pow3";
        case NlKind::skew: return "skew";
        case NlKind::tanh_lc: return "tanh";
        case NlKind::gaus: return "gaus";
    }
    return {};
}

double Nonlinearity::G(double z) const {
    switch (kind_) {
        case NlKind::pow3: return 0.25 * z * z * z * z - center_;
        case NlKind::skew: return z * z * z / 3.0;
        case NlKind::tanh_lc: return log_cosh(a_ * z) / a_ - center_;
        case NlKind::gaus: return -std::exp(-0.5 * a_ * z * z) / a_ - center_;
    }
    return 0.0;
}

double Nonlinearity::g(double z) const {
    switch (kind_) {
        case NlKind::pow3: return z * z * z;
        case NlKind::skew: return z * z;
        case NlKind::tanh_lc: return std::tanh(a_ * z);
        case NlKind::gaus: return z * std::exp(-0.5 * a_ * z * z);
    }
    return 0.0;
}

double Nonlinearity::gprime(double z) const {
    switch (kind_) {
        case NlKind::pow3: return 3.0 * z * z;
        case NlKind::skew: return 2.0 * z;
        case NlKind::tanh_lc: {
            const double t = std::tanh(a_ * z);
            return a_ * (1.0 - t * t);
        }
        case NlKind::gaus: return (1.0 - a_ * z * z) * std::exp(-0.5 * a_ * z * z);
    }
    return 0.0;
}

Eigen::ArrayXd Nonlinearity::G(const Eigen::ArrayXd& z) const {
    return z.unaryExpr([this](double v) { return G(v); });
}

Eigen::ArrayXd Nonlinearity::g(const Eigen::ArrayXd& z) const {
    switch (kind_) {
        case NlKind::pow3: return z.cube();
        case NlKind::skew: return z.square();
        case NlKind::tanh_lc: return (a_ * z).tanh();
        case NlKind::gaus: return z * (-0.5 * a_ * z.square()).exp();
    }
    return {};
}

Eigen::ArrayXd Nonlinearity::gprime(const Eigen::ArrayXd& z) const {
    switch (kind_) {
        case NlKind::pow3: return 3.0 * z.square();
        case NlKind::skew: return 2.0 * z;
        case NlKind::tanh_lc: return a_ * (1.0 - (a_ * z).tanh().square());
        case NlKind::gaus: return (1.0 - a_ * z.square()) * (-0.5 * a_ * z.square()).exp();
    }
    return {};
}

NlKind parse_nl_kind(const std::string& name) {
    if (name == "pow3") return NlKind::pow3;
    if (name == "skew") return NlKind::skew;
    if (name == "tanh") return NlKind::tanh_lc;
    if (name == "gaus") return NlKind::gaus;
    throw std::invalid_argument("unknown nonlinearity '" + name +
                                "' (expected pow3, skew, tanh, gaus)");
}

} // namespace fastica

#include "fastica/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fastica/errors.hpp"
#include "fastica/quadrature.hpp"
#include "fastica/rng.hpp"

namespace fastica {

namespace {

const double kSqrt3 = std::sqrt(3.0);

std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double gamma_log_density(double shape, double y) {
    return (shape - 1.0) * std::log(y) - y - std::lgamma(shape);
}

double normal_density(double x, double mean, double var) {
    const double d = x - mean;
    return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * M_PI * var);
}

} // namespace

SourceDistribution SourceDistribution::exp_power(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("exp_power: shape must be positive, got " + fmt_g(beta));
    SourceDistribution d;
    d.kind_ = DistKind::exp_power;
    d.shape_ = beta;
    d.ep_alpha_ = std::exp(0.5 * (std::lgamma(1.0 / beta) - std::lgamma(3.0 / beta)));
    d.ep_lognorm_ = std::log(beta) - std::log(2.0 * d.ep_alpha_) - std::lgamma(1.0 / beta);
    return d;
}

SourceDistribution SourceDistribution::gamma_std(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("gamma_std: shape must be positive, got " + fmt_g(alpha));
    SourceDistribution d;
    d.kind_ = DistKind::gamma_std;
    d.shape_ = alpha;
    return d;
}

SourceDistribution SourceDistribution::gauss_mix4(const std::array<MixComponent, 4>& raw) {
    double wsum = 0.0;
    for (const auto& c : raw) {
        if (!(c.weight > 0.0) || !(c.var > 0.0) || !std::isfinite(c.mean))
            throw std::invalid_argument("gauss_mix4: weights and variances must be positive");
        wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 0.02)
        throw std::invalid_argument("gauss_mix4: weights sum to " + fmt_g(wsum) +
                                    ", expected 1 within 0.02");
    SourceDistribution d;
    d.kind_ = DistKind::gauss_mix4;
    d.raw_ = raw;
    double mean = 0.0, second = 0.0;
    for (const auto& c : raw) {
        mean += c.weight / wsum * c.mean;
        second += c.weight / wsum * (c.var + c.mean * c.mean);
    }
    const double var = second - mean * mean;
    if (!(var > 0.0))
        throw std::invalid_argument("gauss_mix4: mixture variance is not positive");
    for (const auto& c : raw)
        d.comps_.push_back({c.weight / wsum, (c.mean - mean) / std::sqrt(var), c.var / var});
    return d;
}

SourceDistribution SourceDistribution::uniform() {
    SourceDistribution d;
    d.kind_ = DistKind::uniform;
    return d;
}

SourceDistribution SourceDistribution::std_normal() {
    SourceDistribution d;
    d.kind_ = DistKind::std_normal;
    d.comps_.push_back({1.0, 0.0, 1.0});
    return d;
}

double SourceDistribution::density(double x) const {
    switch (kind_) {
        case DistKind::exp_power:
            return std::exp(ep_lognorm_ - std::pow(std::abs(x) / ep_alpha_, shape_));
        case DistKind::gamma_std: {
            const double root = std::sqrt(shape_);
            const double y = shape_ + root * x;
            if (y <= 0.0) return 0.0;
            return root * std::exp(gamma_log_density(shape_, y));
        }
        case DistKind::uniform:
            return std::abs(x) < kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
        case DistKind::gauss_mix4:
        case DistKind::std_normal: {
            double f = 0.0;
            for (const auto& c : comps_) f += c.weight * normal_density(x, c.mean, c.var);
            return f;
        }
    }
    return 0.0;
}

double SourceDistribution::expect(const std::function<double(double)>& h, double abs_tol) const {
    switch (kind_) {
        case DistKind::exp_power: {
            if (shape_ >= 1.0) {
                // Direct x-space integration; the split at the scale parameter
                // tracks the shoulder that sharpens as the shape grows.
                const double t_hi = 60.0 + std::max(0.0, ep_lognorm_);
                const double x_hi = ep_alpha_ * std::pow(t_hi, 1.0 / shape_);
                auto f = [&](double x) { return h(x) * density(x); };
                const double knots[5] = {-x_hi, -ep_alpha_, 0.0, ep_alpha_, x_hi};
                double total = 0.0;
                for (int i = 0; i < 4; ++i)
                    total += integrate_kronrod(f, knots[i], knots[i + 1], abs_tol / 4.0,
                                               "exp_power expectation");
                return total;
            }
            // Heavy tails: integrate in the gamma variable W with
            // |X| = alpha W^(1/beta), W ~ Gamma(1/beta), which has light tails
            // and no singularity since 1/beta > 1.
            const double k = 1.0 / shape_;
            const double w_hi = k + 40.0 * std::sqrt(k) + 60.0;
            auto f = [&](double w) {
                const double x = ep_alpha_ * std::pow(w, k);
                return 0.5 * (h(x) + h(-x)) * std::exp(gamma_log_density(k, w));
            };
            return integrate_kronrod(f, 0.0, w_hi, abs_tol, "exp_power expectation");
        }
        case DistKind::gamma_std: {
            const double root = std::sqrt(shape_);
            const double y_hi = shape_ + 40.0 * root + 60.0;
            if (shape_ >= 1.0) {
                auto f = [&](double y) {
                    return h((y - shape_) / root) * std::exp(gamma_log_density(shape_, y));
                };
                return integrate_kronrod(f, 0.0, y_hi, abs_tol, "gamma_std expectation");
            }
            // Substituting y = t^(1/alpha) absorbs the density spike at zero.
            const double t_hi = std::pow(y_hi, shape_);
            const double lognorm = -std::lgamma(shape_) - std::log(shape_);
            auto f = [&](double t) {
                const double y = std::pow(t, 1.0 / shape_);
                return h((y - shape_) / root) * std::exp(lognorm - y);
            };
            return integrate_kronrod(f, 0.0, t_hi, abs_tol, "gamma_std expectation");
        }
        case DistKind::uniform: {
            auto f = [&](double x) { return h(x) / (2.0 * kSqrt3); };
            return integrate_kronrod(f, -kSqrt3, kSqrt3, abs_tol, "uniform expectation");
        }
        case DistKind::gauss_mix4:
        case DistKind::std_normal: {
            double total = 0.0;
            for (const auto& c : comps_)
                total += c.weight *
                         normal_expect(h, c.mean, std::sqrt(c.var),
                                       abs_tol / static_cast<double>(comps_.size()));
            return total;
        }
    }
    throw std::logic_error("unreachable distribution kind");
}

Eigen::VectorXd SourceDistribution::sample(std::size_t n, std::uint64_t seed) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(n));
    Rng rng(seed);
    switch (kind_) {
        case DistKind::exp_power: {
            const double k = 1.0 / shape_;
            for (std::size_t i = 0; i < n; ++i) {
                const double s = rng.sign();
                double mag;
                if (k < 1.0) {
                    // W^(1/beta) with W = G U^(1/k), G ~ Gamma(k+1): taking the
                    // power before mixing in U avoids underflow at large beta.
                    mag = std::pow(rng.gamma(k + 1.0), k) * rng.uniform01();
                } else {
                    mag = std::pow(rng.gamma(k), k);
                }
                out[static_cast<Eigen::Index>(i)] = s * ep_alpha_ * mag;
            }
            break;
        }
        case DistKind::gamma_std: {
            const double root = std::sqrt(shape_);
            for (std::size_t i = 0; i < n; ++i)
                out[static_cast<Eigen::Index>(i)] = (rng.gamma(shape_) - shape_) / root;
            break;
        }
        case DistKind::uniform: {
            for (std::size_t i = 0; i < n; ++i)
                out[static_cast<Eigen::Index>(i)] = kSqrt3 * (2.0 * rng.uniform01() - 1.0);
            break;
        }
        case DistKind::gauss_mix4:
        case DistKind::std_normal: {
            for (std::size_t i = 0; i < n; ++i) {
                double u = rng.uniform01();
                const MixComponent* pick = &comps_.back();
                for (const auto& c : comps_) {
                    if (u < c.weight) {
                        pick = &c;
                        break;
                    }
                    u -= c.weight;
                }
                out[static_cast<Eigen::Index>(i)] =
                    pick->mean + std::sqrt(pick->var) * rng.normal();
            }
            break;
        }
    }
    return out;
}

std::string SourceDistribution::spec() const {
    switch (kind_) {
        case DistKind::exp_power:
            return "ep:" + fmt_g(shape_);
        case DistKind::gamma_std:
            return "gamma:" + fmt_g(shape_);
        case DistKind::uniform:
            return "uniform";
        case DistKind::std_normal:
            return "normal";
        case DistKind::gauss_mix4: {
            std::string s = "mix4:";
            for (int i = 0; i < 4; ++i) {
                if (i) s += '|';
                s += fmt_g(raw_[i].weight) + "," + fmt_g(raw_[i].mean) + "," + fmt_g(raw_[i].var);
            }
            return s;
        }
    }
    return {};
}

namespace {

std::array<MixComponent, 4> parse_mix_inline(const std::string& body) {
    std::array<MixComponent, 4> raw{};
    std::stringstream ss(body);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, '|')) {
        if (i >= 4) throw std::invalid_argument("mix4: expected 4 components");
        std::replace(part.begin(), part.end(), ',', ' ');
        std::istringstream ps(part);
        if (!(ps >> raw[i].weight >> raw[i].mean >> raw[i].var))
            throw std::invalid_argument("mix4: bad component '" + part + "'");
        ++i;
    }
    if (i != 4) throw std::invalid_argument("mix4: expected 4 components, got " + std::to_string(i));
    return raw;
}

std::array<MixComponent, 4> parse_mix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("mix4: cannot open '" + path + "'");
    std::array<MixComponent, 4> raw{};
    for (int i = 0; i < 4; ++i)
        if (!(in >> raw[i].weight >> raw[i].mean >> raw[i].var))
            throw std::invalid_argument("mix4: '" + path + "' needs 4 rows: weight mean var");
    return raw;
}

} // namespace

SourceDistribution parse_dist_spec(const std::string& spec) {
    if (spec == "normal") return SourceDistribution::std_normal();
    if (spec == "uniform") return SourceDistribution::uniform();
    if (spec.rfind("ep:", 0) == 0)
        return SourceDistribution::exp_power(std::stod(spec.substr(3)));
    if (spec.rfind("gamma:", 0) == 0)
        return SourceDistribution::gamma_std(std::stod(spec.substr(6)));
    if (spec.rfind("mix4:", 0) == 0) {
        const std::string body = spec.substr(5);
        if (body.find(',') != std::string::npos)
            return SourceDistribution::gauss_mix4(parse_mix_inline(body));
        return SourceDistribution::gauss_mix4(parse_mix_file(body));
    }
    throw std::invalid_argument(
        "unknown distribution '" + spec +
        "' (expected ep:<beta>, gamma:<alpha>, normal, uniform, mix4:...)");
}

} // namespace fastica

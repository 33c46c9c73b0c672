#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "fastica/nonlinearity.hpp"

using fastica::NlKind;
using fastica::Nonlinearity;
using fastica::log_cosh;
using fastica::parse_nl_kind;

TEST_CASE("pow3 values and centering") {
    const auto nl = Nonlinearity::make(NlKind::pow3);
    CHECK(nl.gaussian_mean() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(nl.G(2.0) == doctest::Approx(16.0 / 4.0 - 0.75).epsilon(1e-15));
    CHECK(nl.g(2.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(nl.gprime(2.0) == doctest::Approx(12.0).epsilon(1e-15));
    // the tuning parameter is ignored
    const auto nl7 = Nonlinearity::make(NlKind::pow3, 7.0);
    CHECK(nl7.G(1.3) == nl.G(1.3));
}

TEST_CASE("skew values and centering") {
    const auto nl = Nonlinearity::make(NlKind::skew);
    CHECK(nl.gaussian_mean() == 0.0);
    CHECK(nl.G(2.0) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(nl.g(-1.5) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(nl.gprime(-1.5) == doctest::Approx(-3.0).epsilon(1e-15));
}

TEST_CASE("tanh centering constants") {
    // E[log cosh(a Z)/a] for Z ~ N(0,1), computed independently.
    CHECK(Nonlinearity::make(NlKind::tanh_lc, 1.0).gaussian_mean() ==
          doctest::Approx(0.374567207491438).epsilon(1e-13));
    CHECK(Nonlinearity::make(NlKind::tanh_lc, 2.0).gaussian_mean() ==
          doctest::Approx(0.5283297831164206).epsilon(1e-13));
    const auto nl = Nonlinearity::make(NlKind::tanh_lc, 1.0);
    CHECK(nl.g(1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
    const double t = std::tanh(1.0);
    CHECK(nl.gprime(1.0) == doctest::Approx(1.0 - t * t).epsilon(1e-15));
    CHECK(nl.G(1.0) == doctest::Approx(std::log(std::cosh(1.0)) - nl.gaussian_mean()).epsilon(1e-14));
}

TEST_CASE("gaus centering is closed form") {
    // -1/(a sqrt(1+a))
    CHECK(Nonlinearity::make(NlKind::gaus, 1.0).gaussian_mean() ==
          doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(Nonlinearity::make(NlKind::gaus, 2.0).gaussian_mean() ==
          doctest::Approx(-1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
    const auto nl = Nonlinearity::make(NlKind::gaus, 1.0);
    CHECK(nl.g(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(std::abs(nl.gprime(1.0)) < 1e-16);
    CHECK(nl.G(1.0) == doctest::Approx(-std::exp(-0.5) + 1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("g and gprime are the derivatives of G and g") {
    const double h = 1e-5;
    for (NlKind kind : {NlKind::pow3, NlKind::skew, NlKind::tanh_lc, NlKind::gaus}) {
        for (double a : {1.0, 2.5}) {
            const auto nl = Nonlinearity::make(kind, a);
            for (double z : {-2.3, -0.7, 0.0, 0.4, 1.9}) {
                CAPTURE(nl.name());
                CAPTURE(a);
                CAPTURE(z);
                const double dG = (nl.G(z + h) - nl.G(z - h)) / (2.0 * h);
                const double dg = (nl.g(z + h) - nl.g(z - h)) / (2.0 * h);
                CHECK(dG == doctest::Approx(nl.g(z)).epsilon(1e-7).scale(1.0));
                CHECK(dg == doctest::Approx(nl.gprime(z)).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("batch evaluation matches scalar evaluation") {
    Eigen::ArrayXd z(5);
    z << -2.0, -0.5, 0.0, 1.0, 3.0;
    for (NlKind kind : {NlKind::pow3, NlKind::skew, NlKind::tanh_lc, NlKind::gaus}) {
        const auto nl = Nonlinearity::make(kind, 1.5);
        const Eigen::ArrayXd G = nl.G(z), g = nl.g(z), gp = nl.gprime(z);
        for (int i = 0; i < z.size(); ++i) {
            CHECK(G[i] == nl.G(z[i]));
            CHECK(g[i] == nl.g(z[i]));
            CHECK(gp[i] == nl.gprime(z[i]));
        }
    }
}

TEST_CASE("log_cosh is overflow safe and even") {
    CHECK(log_cosh(0.0) == 0.0);
    CHECK(log_cosh(800.0) == doctest::Approx(800.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(log_cosh(-800.0) == log_cosh(800.0));
    CHECK(log_cosh(1.0) == doctest::Approx(std::log(std::cosh(1.0))).epsilon(1e-15));
    CHECK(std::isfinite(log_cosh(1e308)));
}

TEST_CASE("tuning parameter validation") {
    CHECK_THROWS_AS(Nonlinearity::make(NlKind::tanh_lc, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::make(NlKind::gaus, -1.0), std::invalid_argument);
    CHECK_NOTHROW(Nonlinearity::make(NlKind::pow3, -1.0));
}

TEST_CASE("kind names parse and print") {
    CHECK(parse_nl_kind("pow3") == NlKind::pow3);
    CHECK(parse_nl_kind("skew") == NlKind::skew);
    CHECK(parse_nl_kind("tanh") == NlKind::tanh_lc);
    CHECK(parse_nl_kind("gaus") == NlKind::gaus);
    CHECK_THROWS_AS(parse_nl_kind("cube"), std::invalid_argument);
    CHECK(Nonlinearity::make(NlKind::tanh_lc).name() == "tanh");
}

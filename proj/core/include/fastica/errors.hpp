#ifndef FASTICA_ERRORS_HPP
#define FASTICA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fastica {

// Numeric integration did not reach the requested tolerance.
struct quadrature_error : std::runtime_error {
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

// Sample covariance is (numerically) rank deficient.
struct singular_covariance_error : std::runtime_error {
    explicit singular_covariance_error(const std::string& what) : std::runtime_error(what) {}
};

// An estimator update collapsed: zero update direction, singular update
// stack, or all nongaussianity weights vanished.
struct degenerate_data_error : std::runtime_error {
    explicit degenerate_data_error(const std::string& what) : std::runtime_error(what) {}
};

// The requested quantity is undefined for this (distribution, nonlinearity)
// combination, e.g. both sources of a pair behave like Gaussians under G.
struct identifiability_error : std::runtime_error {
    explicit identifiability_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fastica

#endif

#ifndef FASTICA_HARNESS_HPP
#define FASTICA_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fastica/estimators.hpp"

namespace fastica {

struct SimulationConfig {
    std::vector<std::string> dists;  // distribution spec strings, one per component
    std::size_t n = 1000;
    int M = 1000;
    std::vector<Method> methods{Method::defl, Method::sym, Method::sym2};
    std::string nonlinearity = "pow3";
    double a = 1.0;
    Eigen::MatrixXd Omega;  // empty = identity
    std::uint64_t master_seed = 1;
    double tol = 1e-9;
    int max_iter = 2000;
    int threads = 1;
    bool keep_replicates = false;
};

struct MethodRun {
    Method method = Method::defl;
    int used = 0;      // replicates contributing to the mean
    int failures = 0;  // non-converged or degenerate replicates
    double mean_stat = std::numeric_limits<double>::quiet_NaN();   // mean n(p-1)D^2
    double stderr_stat = std::numeric_limits<double>::quiet_NaN();
    double limit = std::numeric_limits<double>::quiet_NaN();  // asymptotic value
    std::vector<double> stats;  // per-replicate statistic when kept; NaN = failed
};

struct ArePair {
    Method a = Method::sym2;
    Method b = Method::sym;
    // Ratio of summed statistics of b over a across the replicates where both
    // converged; NaN when that set is empty.
    double finite = std::numeric_limits<double>::quiet_NaN();
    double asymptotic = std::numeric_limits<double>::quiet_NaN();
};

struct SimulationResult {
    SimulationConfig config;
    std::vector<MethodRun> runs;
    std::vector<ArePair> pairs;  // every ordered method pair
};

// Draws M independent mixed samples, runs every configured method on each
// (same data per replicate), and aggregates n(p-1)D^2. Replicate i uses seeds
// derived from (master_seed, i), so results are byte-identical for a fixed
// config at any thread count. Failures are excluded from the means and
// counted; a method failing on every replicate yields NaN summaries, not an
// error.
SimulationResult run_simulation(const SimulationConfig& cfg);

struct AreCell {
    double value = std::numeric_limits<double>::quiet_NaN();  // NaN = unavailable
    // Second nonlinearity's value; only on the diagonal in finite mode.
    double value_alt = std::numeric_limits<double>::quiet_NaN();
};

struct AreTable {
    std::vector<std::string> dists;
    std::vector<std::string> nls;  // [0] fills the upper triangle, [1] the lower
    double a = 1.0;
    Method method_a = Method::sym2;
    Method method_b = Method::sym;
    bool finite = false;
    std::size_t n = 0;
    int M = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<AreCell>> cells;  // [row][col]
};

// Pairwise ARE(method_a, method_b) over distribution pairs. M == 0 selects
// asymptotic mode; M > 0 runs Monte Carlo per cell with per-cell seeds derived
// from `seed`. Unidentifiable cells (for example two Gaussians) come back NaN.
AreTable are_table(const std::vector<std::string>& dist_specs,
                   const std::vector<std::string>& nl_names, double a, Method method_a,
                   Method method_b, std::size_t n, int M, std::uint64_t seed);

enum class DistFamily { ep, gamma };

std::string family_name(DistFamily f);
DistFamily parse_family(const std::string& name);

struct ContourGrid {
    DistFamily family = DistFamily::ep;
    std::vector<double> shapes;
    Method method_a = Method::sym2;
    Method method_b = Method::sym;
    std::string nonlinearity = "pow3";
    double a = 1.0;
    bool finite = false;
    std::size_t n = 0;
    int M = 0;
    std::uint64_t seed = 0;
    // value[i][j]: ARE(method_a, method_b) for sources (shape_i, shape_j) in
    // asymptotic mode, mean n(p-1)D^2 of method_a in finite mode.
    std::vector<std::vector<double>> value;
    // Finite mode only: the asymptotic statistic limit per cell.
    std::vector<std::vector<double>> limit;
};

// Shape-by-shape efficiency surface over one distribution family.
ContourGrid contour_grid(DistFamily family, const std::vector<double>& shapes,
                         Method method_a, Method method_b, const std::string& nl_name,
                         double a, bool finite, std::size_t n, int M, std::uint64_t seed);

} // namespace fastica

#endif

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "fastica/mdi.hpp"
#include "fastica/rng.hpp"

using namespace fastica;

namespace {

// Identity plus noise: scores are close together, so the assignment step
// actually has to work for its answer.
Eigen::MatrixXd noisy_gain(int p, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) G(i, j) += 0.3 * rng.normal();
    return G;
}

} // namespace

static void BM_MdiAssignment(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const Eigen::MatrixXd G = noisy_gain(p, 123);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
    for (auto _ : state) benchmark::DoNotOptimize(minimum_distance_index(G, I));
}
BENCHMARK(BM_MdiAssignment)->Unit(benchmark::kMicrosecond)->RangeMultiplier(2)->Range(2, 64);

static void BM_MdiBruteforce(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const Eigen::MatrixXd G = noisy_gain(p, 123);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
    for (auto _ : state) benchmark::DoNotOptimize(mdi_bruteforce(G, I));
}
BENCHMARK(BM_MdiBruteforce)->Unit(benchmark::kMicrosecond)->DenseRange(4, 7);

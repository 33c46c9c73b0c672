#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "fastica/asymptotics.hpp"
#include "fastica/distributions.hpp"
#include "fastica/estimators.hpp"
#include "fastica/nonlinearity.hpp"
#include "fastica/rng.hpp"

using namespace fastica;

namespace {

// Alternating Laplace/uniform sources under a random orthogonal mixing matrix.
DataMatrix make_data(int p, int n) {
    Eigen::MatrixXd S(p, n);
    for (int j = 0; j < p; ++j) {
        const auto dist = (j % 2 == 0) ? SourceDistribution::exp_power(1.0)
                                       : SourceDistribution::uniform();
        S.row(j) =
            dist.sample(static_cast<std::size_t>(n), mix_seed(9000, static_cast<std::uint64_t>(j)))
                .transpose();
    }
    Rng rng(77);
    return DataMatrix(random_orthogonal(p, rng) * S);
}

} // namespace

static void BM_Whiten(benchmark::State& state) {
    const auto data = make_data(static_cast<int>(state.range(0)), 4000);
    for (auto _ : state) benchmark::DoNotOptimize(whiten(data));
}
BENCHMARK(BM_Whiten)->Unit(benchmark::kMicrosecond)->RangeMultiplier(2)->Range(2, 16);

static void BM_Estimate(benchmark::State& state, Method method, NlKind g) {
    const int p = 4;
    const auto data = make_data(p, static_cast<int>(state.range(0)));
    const auto nl = Nonlinearity::make(g);
    Rng rng(5);
    const Eigen::MatrixXd U0 = random_orthogonal(p, rng);
    for (auto _ : state) benchmark::DoNotOptimize(estimate(data, nl, method, U0));
}
BENCHMARK_CAPTURE(BM_Estimate, defl_pow3, Method::defl, NlKind::pow3)
    ->Unit(benchmark::kMillisecond)
    ->Arg(1000)
    ->Arg(4000);
BENCHMARK_CAPTURE(BM_Estimate, sym_pow3, Method::sym, NlKind::pow3)
    ->Unit(benchmark::kMillisecond)
    ->Arg(1000)
    ->Arg(4000);
BENCHMARK_CAPTURE(BM_Estimate, sym2_pow3, Method::sym2, NlKind::pow3)
    ->Unit(benchmark::kMillisecond)
    ->Arg(1000)
    ->Arg(4000);
BENCHMARK_CAPTURE(BM_Estimate, sym2_tanh, Method::sym2, NlKind::tanh_lc)
    ->Unit(benchmark::kMillisecond)
    ->Arg(1000)
    ->Arg(4000);

// pow3 moments close over low-order polynomial moments; tanh goes through the
// quadrature ladder, so the gap here is the price of the nonpolynomial contrast.
static void BM_MomentSet(benchmark::State& state, NlKind g) {
    const auto d = SourceDistribution::gamma_std(1.0);
    const auto nl = Nonlinearity::make(g);
    for (auto _ : state) benchmark::DoNotOptimize(moment_set(d, nl));
}
BENCHMARK_CAPTURE(BM_MomentSet, pow3, NlKind::pow3)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_MomentSet, tanh, NlKind::tanh_lc)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

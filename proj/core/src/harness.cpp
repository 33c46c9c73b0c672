#include "fastica/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "fastica/asymptotics.hpp"
#include "fastica/distributions.hpp"
#include "fastica/errors.hpp"
#include "fastica/mdi.hpp"
#include "fastica/rng.hpp"

namespace fastica {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sum with a fixed pairwise reduction tree so the result does not depend on
// how replicates were scheduled across threads.
double pairwise_sum(const double* v, std::size_t len) {
    if (len == 0) return 0.0;
    if (len <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += v[i];
        return s;
    }
    const std::size_t half = len / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, len - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

} // namespace

SimulationResult run_simulation(const SimulationConfig& cfg) {
    std::vector<SourceDistribution> dists;
    dists.reserve(cfg.dists.size());
    for (const auto& spec : cfg.dists) dists.push_back(parse_dist_spec(spec));
    const std::size_t p = dists.size();
    if (p < 2) throw std::invalid_argument("simulation needs at least two components");
    if (cfg.n <= 10 * p) throw std::invalid_argument("sample size must exceed 10 x components");
    if (cfg.M < 1) throw std::invalid_argument("replicate count must be at least 1");
    if (cfg.methods.empty()) throw std::invalid_argument("no methods configured");

    Eigen::MatrixXd Omega = cfg.Omega;
    if (Omega.size() == 0)
        Omega = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(p));
    if (Omega.rows() != static_cast<Eigen::Index>(p) || Omega.cols() != Omega.rows())
        throw std::invalid_argument("mixing matrix dimensions do not match the sources");
    if (!Eigen::FullPivLU<Eigen::MatrixXd>(Omega).isInvertible())
        throw std::invalid_argument("mixing matrix is singular");

    const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(cfg.nonlinearity), cfg.a);
    const EstimatorOptions opts{cfg.tol, cfg.max_iter};
    const std::size_t nm = cfg.methods.size();
    const int M = cfg.M;

    std::vector<std::vector<double>> stats(nm, std::vector<double>(static_cast<std::size_t>(M),
                                                                   kNaN));

    bool need_random_start = false;
    for (Method m : cfg.methods) need_random_start |= (m != Method::defl);

    auto run_replicate = [&](int i) {
        const std::uint64_t rep_seed = mix_seed(cfg.master_seed, static_cast<std::uint64_t>(i) + 1);
        const std::uint64_t u0_seed = mix_seed(rep_seed, 1);
        try {
            Eigen::MatrixXd Z(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(cfg.n));
            for (std::size_t j = 0; j < p; ++j)
                Z.row(static_cast<Eigen::Index>(j)) =
                    dists[j].sample(cfg.n, mix_seed(rep_seed, j + 2)).transpose();
            const DataMatrix data(Omega * Z);

            Eigen::MatrixXd U0_rand;
            if (need_random_start) {
                Rng r(u0_seed);
                U0_rand = random_orthogonal(static_cast<int>(p), r);
            }
            for (std::size_t mi = 0; mi < nm; ++mi) {
                const Method m = cfg.methods[mi];
                try {
                    const Eigen::MatrixXd& U0 =
                        m == Method::defl ? initial_rotation(data, nl, u0_seed).U0 : U0_rand;
                    const UnmixingEstimate est = estimate(data, nl, m, U0, opts);
                    if (est.converged)
                        stats[mi][static_cast<std::size_t>(i)] =
                            scaled_mdi_statistic(est.Gamma, Omega, cfg.n);
                } catch (const std::exception&) {
                }
            }
        } catch (const std::exception&) {
        }
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || M == 1) {
        for (int i = 0; i < M; ++i) run_replicate(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < M; i = next.fetch_add(1)) run_replicate(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<MomentSet> moments;
    moments.reserve(p);
    for (const auto& d : dists) moments.push_back(moment_set(d, nl));

    SimulationResult result;
    result.config = cfg;
    result.runs.reserve(nm);
    for (std::size_t mi = 0; mi < nm; ++mi) {
        MethodRun run;
        run.method = cfg.methods[mi];
        std::vector<double> ok;
        ok.reserve(static_cast<std::size_t>(M));
        for (double v : stats[mi])
            if (!std::isnan(v)) ok.push_back(v);
        run.used = static_cast<int>(ok.size());
        run.failures = M - run.used;
        if (!ok.empty()) {
            run.mean_stat = pairwise_sum(ok) / static_cast<double>(ok.size());
            if (ok.size() > 1) {
                std::vector<double> sq;
                sq.reserve(ok.size());
                for (double v : ok) sq.push_back((v - run.mean_stat) * (v - run.mean_stat));
                run.stderr_stat = std::sqrt(pairwise_sum(sq) /
                                            (static_cast<double>(ok.size() - 1) *
                                             static_cast<double>(ok.size())));
            }
        }
        try {
            run.limit = expected_mdi_limit(cfg.methods[mi], moments);
        } catch (const std::exception&) {
        }
        if (cfg.keep_replicates) run.stats = stats[mi];
        result.runs.push_back(std::move(run));
    }

    for (std::size_t ai = 0; ai < nm; ++ai)
        for (std::size_t bi = 0; bi < nm; ++bi) {
            if (ai == bi) continue;
            ArePair pr;
            pr.a = cfg.methods[ai];
            pr.b = cfg.methods[bi];
            std::vector<double> sa, sb;
            for (int i = 0; i < M; ++i) {
                const double va = stats[ai][static_cast<std::size_t>(i)];
                const double vb = stats[bi][static_cast<std::size_t>(i)];
                if (!std::isnan(va) && !std::isnan(vb)) {
                    sa.push_back(va);
                    sb.push_back(vb);
                }
            }
            if (!sa.empty()) {
                const double sum_a = pairwise_sum(sa);
                if (sum_a > 0.0) pr.finite = pairwise_sum(sb) / sum_a;
            }
            try {
                pr.asymptotic = expected_mdi_limit(pr.b, moments) /
                                expected_mdi_limit(pr.a, moments);
            } catch (const std::exception&) {
            }
            result.pairs.push_back(pr);
        }

    return result;
}

AreTable are_table(const std::vector<std::string>& dist_specs,
                   const std::vector<std::string>& nl_names, double a, Method method_a,
                   Method method_b, std::size_t n, int M, std::uint64_t seed) {
    if (dist_specs.size() < 2) throw std::invalid_argument("table needs at least 2 distributions");
    if (nl_names.empty() || nl_names.size() > 2)
        throw std::invalid_argument("table takes one or two nonlinearities");

    AreTable table;
    table.dists = dist_specs;
    table.nls = nl_names;
    table.a = a;
    table.method_a = method_a;
    table.method_b = method_b;
    table.finite = M > 0;
    table.n = n;
    table.M = M;
    table.seed = seed;

    const std::size_t K = dist_specs.size();
    table.cells.assign(K, std::vector<AreCell>(K));
    const std::size_t lower_nl = nl_names.size() > 1 ? 1 : 0;

    if (!table.finite) {
        std::vector<std::vector<MomentSet>> ms(nl_names.size());
        for (std::size_t ni = 0; ni < nl_names.size(); ++ni) {
            const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(nl_names[ni]), a);
            for (const auto& spec : dist_specs)
                ms[ni].push_back(moment_set(parse_dist_spec(spec), nl));
        }
        for (std::size_t r = 0; r < K; ++r)
            for (std::size_t c = 0; c < K; ++c) {
                const std::size_t ni = r <= c ? 0 : lower_nl;
                try {
                    table.cells[r][c].value =
                        are_from_moments(method_a, method_b, ms[ni][r], ms[ni][c]);
                } catch (const std::exception&) {
                }
            }
        return table;
    }

    auto cell_value = [&](std::size_t r, std::size_t c, const std::string& nl_name,
                          std::uint64_t cell_seed) {
        SimulationConfig cfg;
        cfg.dists = {dist_specs[r], dist_specs[c]};
        cfg.n = n;
        cfg.M = M;
        cfg.methods = {method_a, method_b};
        cfg.nonlinearity = nl_name;
        cfg.a = a;
        cfg.master_seed = cell_seed;
        try {
            const SimulationResult res = run_simulation(cfg);
            for (const auto& pr : res.pairs)
                if (pr.a == method_a && pr.b == method_b) return pr.finite;
        } catch (const std::exception&) {
        }
        return kNaN;
    };

    for (std::size_t r = 0; r < K; ++r)
        for (std::size_t c = 0; c < K; ++c) {
            const std::size_t ni = r <= c ? 0 : lower_nl;
            table.cells[r][c].value = cell_value(r, c, nl_names[ni], mix_seed(seed, r * K + c + 1));
            if (r == c && nl_names.size() > 1)
                table.cells[r][c].value_alt =
                    cell_value(r, c, nl_names[1], mix_seed(seed, K * K + r * K + c + 1));
        }
    return table;
}

std::string family_name(DistFamily f) { return f == DistFamily::ep ? "ep" : "gamma"; }

DistFamily parse_family(const std::string& name) {
    if (name == "ep") return DistFamily::ep;
    if (name == "gamma") return DistFamily::gamma;
    throw std::invalid_argument("unknown family '" + name + "' (expected ep, gamma)");
}

ContourGrid contour_grid(DistFamily family, const std::vector<double>& shapes,
                         Method method_a, Method method_b, const std::string& nl_name,
                         double a, bool finite, std::size_t n, int M, std::uint64_t seed) {
    if (shapes.empty()) throw std::invalid_argument("shape grid is empty");

    ContourGrid grid;
    grid.family = family;
    grid.shapes = shapes;
    grid.method_a = method_a;
    grid.method_b = method_b;
    grid.nonlinearity = nl_name;
    grid.a = a;
    grid.finite = finite;
    grid.n = n;
    grid.M = M;
    grid.seed = seed;

    const std::size_t K = shapes.size();
    grid.value.assign(K, std::vector<double>(K, kNaN));
    if (finite) grid.limit.assign(K, std::vector<double>(K, kNaN));

    auto spec_of = [&](double shape) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%s:%.17g", family == DistFamily::ep ? "ep" : "gamma",
                      shape);
        return std::string(buf);
    };

    if (!finite) {
        const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(nl_name), a);
        std::vector<MomentSet> ms;
        ms.reserve(K);
        for (double s : shapes) ms.push_back(moment_set(parse_dist_spec(spec_of(s)), nl));
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) {
                try {
                    grid.value[i][j] = are_from_moments(method_a, method_b, ms[i], ms[j]);
                } catch (const std::exception&) {
                }
            }
        return grid;
    }

    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            SimulationConfig cfg;
            cfg.dists = {spec_of(shapes[i]), spec_of(shapes[j])};
            cfg.n = n;
            cfg.M = M;
            cfg.methods = {method_a};
            cfg.nonlinearity = nl_name;
            cfg.a = a;
            cfg.master_seed = mix_seed(seed, i * K + j + 1);
            try {
                const SimulationResult res = run_simulation(cfg);
                grid.value[i][j] = res.runs[0].mean_stat;
                grid.limit[i][j] = res.runs[0].limit;
            } catch (const std::exception&) {
            }
        }
    return grid;
}

} // namespace fastica

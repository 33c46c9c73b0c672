#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "fastica/asymptotics.hpp"
#include "fastica/harness.hpp"
#include "fastica/io.hpp"
#include "fastica/rng.hpp"

using namespace fastica;

namespace {

SimulationConfig small_config() {
    SimulationConfig cfg;
    cfg.dists = {"ep:1", "uniform"};
    cfg.n = 400;
    cfg.M = 12;
    cfg.master_seed = 5;
    cfg.keep_replicates = true;
    return cfg;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content = "") : path(name) {
        if (!content.empty()) {
            std::ofstream out(path);
            out << content;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("simulation results are reproducible and thread independent") {
    auto cfg = small_config();
    const auto r1 = run_simulation(cfg);
    const auto r2 = run_simulation(cfg);
    cfg.threads = 3;
    const auto r3 = run_simulation(cfg);
    REQUIRE(r1.runs.size() == 3);
    for (std::size_t k = 0; k < r1.runs.size(); ++k) {
        CHECK(r1.runs[k].mean_stat == r2.runs[k].mean_stat);
        CHECK(r1.runs[k].mean_stat == r3.runs[k].mean_stat);
        REQUIRE(r1.runs[k].stats.size() == r3.runs[k].stats.size());
        for (std::size_t i = 0; i < r1.runs[k].stats.size(); ++i)
            CHECK(r1.runs[k].stats[i] == r3.runs[k].stats[i]);
    }
}

TEST_CASE("simulation bookkeeping") {
    const auto cfg = small_config();
    const auto res = run_simulation(cfg);
    for (const auto& run : res.runs) {
        CHECK(run.used + run.failures == cfg.M);
        REQUIRE(int(run.stats.size()) == cfg.M);

        // summary recomputes from the kept replicates
        double sum = 0.0;
        int used = 0;
        for (double v : run.stats)
            if (std::isfinite(v)) {
                sum += v;
                ++used;
            }
        CHECK(used == run.used);
        if (used > 0) CHECK(run.mean_stat == doctest::Approx(sum / used).epsilon(1e-14));

        const auto nl = Nonlinearity::make(parse_nl_kind(cfg.nonlinearity), cfg.a);
        std::vector<SourceDistribution> dists;
        for (const auto& s : cfg.dists) dists.push_back(parse_dist_spec(s));
        CHECK(run.limit == doctest::Approx(expected_mdi_limit(run.method, dists, nl)));
    }

    // pair ratios recompute from the jointly converged replicates
    REQUIRE(!res.pairs.empty());
    const auto& runs = res.runs;
    for (const auto& pr : res.pairs) {
        const MethodRun* ra = nullptr;
        const MethodRun* rb = nullptr;
        for (const auto& r : runs) {
            if (r.method == pr.a) ra = &r;
            if (r.method == pr.b) rb = &r;
        }
        REQUIRE(ra);
        REQUIRE(rb);
        double sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < ra->stats.size(); ++i)
            if (std::isfinite(ra->stats[i]) && std::isfinite(rb->stats[i])) {
                sa += ra->stats[i];
                sb += rb->stats[i];
            }
        CHECK(pr.finite == doctest::Approx(sb / sa).epsilon(1e-12));
        CHECK(pr.asymptotic == doctest::Approx(rb->limit / ra->limit).epsilon(1e-12));
    }
}

TEST_CASE("simulation honors a custom mixing matrix") {
    auto cfg = small_config();
    cfg.Omega.resize(2, 2);
    cfg.Omega << 2.0, 1.0,
                 0.0, 1.0;
    const auto res = run_simulation(cfg);
    for (const auto& run : res.runs) CHECK(run.used > 0);
}

TEST_CASE("simulation rejects bad configurations") {
    auto cfg = small_config();
    cfg.dists = {"ep:1"};
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

    cfg = small_config();
    cfg.n = 20; // needs n > 10 p
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

    cfg = small_config();
    cfg.M = 0;
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

    cfg = small_config();
    cfg.methods.clear();
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

    cfg = small_config();
    cfg.Omega = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);

    cfg = small_config();
    cfg.Omega = Eigen::MatrixXd::Ones(2, 2); // singular
    CHECK_THROWS_AS(run_simulation(cfg), std::invalid_argument);
}

TEST_CASE("two Gaussian sources cannot be separated") {
    SimulationConfig cfg;
    cfg.dists = {"normal", "normal"};
    cfg.n = 500;
    cfg.M = 20;
    cfg.master_seed = 9;
    const auto res = run_simulation(cfg);
    for (const auto& run : res.runs) {
        CHECK(run.used + run.failures == cfg.M);
        CHECK_FALSE(std::isfinite(run.limit)); // no asymptotic value exists
    }
}

TEST_CASE("efficiency table in asymptotic mode") {
    const auto table =
        are_table({"ep:1", "uniform", "normal"}, {"pow3", "tanh"}, 1.0, Method::sym2,
                  Method::sym, 0, 0, 1);
    REQUIRE(table.cells.size() == 3);
    CHECK_FALSE(table.finite);

    const auto L = parse_dist_spec("ep:1");
    const auto U = parse_dist_spec("uniform");
    const auto pow3 = Nonlinearity::make(NlKind::pow3);
    const auto tanh_nl = Nonlinearity::make(NlKind::tanh_lc);

    CHECK(table.cells[0][1].value ==
          doctest::Approx(are(Method::sym2, Method::sym, L, U, pow3)).epsilon(1e-12));
    CHECK(table.cells[1][0].value ==
          doctest::Approx(are(Method::sym2, Method::sym, U, L, tanh_nl)).epsilon(1e-12));
    // Gaussian-Gaussian cell has no value
    CHECK_FALSE(std::isfinite(table.cells[2][2].value));
    // the Gaussian row still works against other sources
    CHECK(std::isfinite(table.cells[2][0].value));

    CHECK_THROWS_AS(are_table({"ep:1"}, {"pow3"}, 1.0, Method::sym2, Method::sym, 0, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(are_table({"ep:1", "uniform"}, {}, 1.0, Method::sym2, Method::sym, 0, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("efficiency table in finite mode fills the diagonal alternate") {
    const auto table = are_table({"ep:1", "uniform"}, {"pow3", "tanh"}, 1.0, Method::sym2,
                                 Method::defl, 300, 6, 17);
    CHECK(table.finite);
    CHECK(std::isfinite(table.cells[0][0].value));
    CHECK(std::isfinite(table.cells[0][0].value_alt));
    CHECK(std::isfinite(table.cells[0][1].value));
    // off-diagonal cells have no alternate
    CHECK_FALSE(std::isfinite(table.cells[0][1].value_alt));
}

TEST_CASE("contour grid in asymptotic mode") {
    const auto grid = contour_grid(DistFamily::ep, {1.0, 2.0, 4.0}, Method::sym2, Method::sym,
                                   "pow3", 1.0, false, 0, 0, 1);
    REQUIRE(grid.value.size() == 3);
    CHECK(grid.value[0][2] == doctest::Approx(grid.value[2][0]).epsilon(1e-12));
    CHECK_FALSE(std::isfinite(grid.value[1][1])); // ep:2 is the normal
    const auto L = parse_dist_spec("ep:1");
    const auto E4 = parse_dist_spec("ep:4");
    CHECK(grid.value[0][2] ==
          doctest::Approx(are(Method::sym2, Method::sym, L, E4,
                              Nonlinearity::make(NlKind::pow3)))
              .epsilon(1e-12));
    CHECK(grid.limit.empty());

    CHECK_THROWS_AS(contour_grid(DistFamily::ep, {}, Method::sym2, Method::sym, "pow3", 1.0,
                                 false, 0, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("contour grid in finite mode carries the statistic limits") {
    const auto grid = contour_grid(DistFamily::gamma, {1.0, 4.0}, Method::sym2, Method::sym,
                                   "pow3", 1.0, true, 300, 5, 23);
    REQUIRE(grid.value.size() == 2);
    REQUIRE(grid.limit.size() == 2);
    const auto G1 = parse_dist_spec("gamma:1");
    const auto G4 = parse_dist_spec("gamma:4");
    const auto pow3 = Nonlinearity::make(NlKind::pow3);
    CHECK(grid.limit[0][1] ==
          doctest::Approx(expected_mdi_limit(Method::sym2, {G1, G4}, pow3)).epsilon(1e-10));
    CHECK(std::isfinite(grid.value[0][1]));
}

TEST_CASE("family names") {
    CHECK(family_name(DistFamily::ep) == "ep");
    CHECK(parse_family("gamma") == DistFamily::gamma);
    CHECK_THROWS_AS(parse_family("beta"), std::invalid_argument);
}

TEST_CASE("csv matrices read back strictly") {
    TempFile good("io_test_good.csv", "1,2.5\n-3e2,4\n");
    const auto m = read_csv_matrix(good.path);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 2);
    CHECK(m(0, 1) == 2.5);
    CHECK(m(1, 0) == -300.0);

    TempFile ragged("io_test_ragged.csv", "1,2\n3\n");
    CHECK_THROWS_WITH_AS(read_csv_matrix(ragged.path),
                         doctest::Contains("io_test_ragged.csv"), std::runtime_error);

    TempFile junk("io_test_junk.csv", "1,2x\n3,4\n");
    CHECK_THROWS_AS(read_csv_matrix(junk.path), std::runtime_error);

    TempFile empty("io_test_empty.csv", "\n");
    CHECK_THROWS_AS(read_csv_matrix(empty.path), std::runtime_error);

    CHECK_THROWS_AS(read_csv_matrix("does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("simulation serializers") {
    const auto res = run_simulation(small_config());

    std::ostringstream csv;
    write_csv(res, csv);
    std::istringstream lines(csv.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "record,method_a,method_b,used,failures,mean_stat,stderr_stat,limit,finite_are,"
          "asymptotic_are");
    int method_rows = 0, pair_rows = 0;
    for (std::string line; std::getline(lines, line);) {
        if (line.rfind("method,", 0) == 0) ++method_rows;
        if (line.rfind("pair,", 0) == 0) ++pair_rows;
    }
    CHECK(method_rows == 3);
    CHECK(pair_rows == 6);

    std::ostringstream js;
    write_json(res, js);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc.contains("config"));
    CHECK(doc.contains("summary"));
    CHECK(doc.contains("version"));
    CHECK(doc["config"]["n"] == 400);
    CHECK(doc["summary"]["methods"].size() == 3);
    CHECK(doc["summary"]["pairs"].size() == 6);
    // full precision survives the round trip
    const double mean = doc["summary"]["methods"][0]["mean_stat"].get<double>();
    CHECK(mean == res.runs[0].mean_stat);
}

TEST_CASE("json writes null for missing values") {
    const auto table =
        are_table({"normal", "normal"}, {"pow3"}, 1.0, Method::sym2, Method::sym, 0, 0, 1);
    std::ostringstream js;
    write_json(table, js);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["cells"][0]["value"].is_null());

    std::ostringstream csv;
    write_csv(table, csv);
    // NaN prints as an empty field
    CHECK(csv.str().find("normal,normal,pow3,\n") != std::string::npos);
}

TEST_CASE("emit writes files and reports path errors") {
    const auto grid = contour_grid(DistFamily::ep, {1.0, 3.0}, Method::sym2, Method::sym,
                                   "pow3", 1.0, false, 0, 0, 1);
    TempFile out("io_test_grid.csv");
    emit(grid, EmitFormat::csv, out.path);
    std::ifstream in(out.path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "shape1,shape2,value");

    CHECK_THROWS_WITH_AS(emit(grid, EmitFormat::csv, "no_such_dir/x.csv"),
                         doctest::Contains("no_such_dir"), std::runtime_error);
    CHECK(parse_format("json") == EmitFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("seed mixing separates streams") {
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(1, 2) != mix_seed(2, 2));
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}

TEST_CASE("random orthogonal matrices") {
    Rng rng(77);
    const Eigen::MatrixXd Q = random_orthogonal(5, rng);
    CHECK((Q * Q.transpose() - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(std::abs(Q.determinant()) - 1.0) < 1e-12);
    Rng rng2(77);
    CHECK((Q - random_orthogonal(5, rng2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("raw draws") {
    Rng rng(123);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);

    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gamma(0.7);
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(mean == doctest::Approx(0.7).epsilon(0.02));
    CHECK(var == doctest::Approx(0.7).epsilon(0.05));
}

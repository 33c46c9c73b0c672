#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "fastica/asymptotics.hpp"
#include "fastica/distributions.hpp"
#include "fastica/errors.hpp"
#include "fastica/estimators.hpp"
#include "fastica/harness.hpp"
#include "fastica/io.hpp"
#include "fastica/mdi.hpp"
#include "fastica/nonlinearity.hpp"
#include "fastica/rng.hpp"

namespace {

using namespace fastica;

std::string fmt(double x) {
    if (std::isnan(x)) return "-";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

struct CommonOpts {
    std::string dist1, dist2;
    std::string nonlinearity = "pow3";
    double a = 1.0;
    std::size_t n = 1000;
    int M = 1000;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    int max_iter = 2000;
    std::string mode = "asymptotic";
    std::string format = "csv";
    std::string out;
};

void add_dist_pair(CLI::App* cmd, CommonOpts& o, bool required) {
    auto* d1 = cmd->add_option("--dist1", o.dist1,
                               "First source (ep:<beta>, gamma:<alpha>, normal, uniform, "
                               "mix4:<file or inline>)");
    auto* d2 = cmd->add_option("--dist2", o.dist2, "Second source");
    if (required) {
        d1->required();
        d2->required();
    }
}

void add_nl(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--nonlinearity", o.nonlinearity, "Contrast: pow3, skew, tanh, gaus")
        ->default_val("pow3");
    cmd->add_option("--a", o.a, "Tuning constant for tanh/gaus")->default_val(1.0);
}

void add_estimation(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--tol", o.tol, "Fixed-point convergence tolerance")->default_val(1e-9);
    cmd->add_option("--max-iter", o.max_iter, "Iteration cap")->default_val(2000);
}

void add_output(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--format", o.format, "Output format: csv, json")->default_val("csv");
    cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
}

int cmd_simulate(const CommonOpts& o, const std::vector<std::string>& dists,
                 const std::vector<std::string>& methods, const std::string& omega_path,
                 int threads, bool keep_replicates) {
    SimulationConfig cfg;
    cfg.dists = dists;
    if (cfg.dists.empty()) {
        if (o.dist1.empty() || o.dist2.empty())
            throw CLI::ValidationError("simulate", "give --dist twice or --dist1/--dist2");
        cfg.dists = {o.dist1, o.dist2};
    }
    cfg.n = o.n;
    cfg.M = o.M;
    if (!methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    }
    cfg.nonlinearity = o.nonlinearity;
    cfg.a = o.a;
    if (!omega_path.empty()) cfg.Omega = read_csv_matrix(omega_path);
    cfg.master_seed = o.seed;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.threads = threads;
    cfg.keep_replicates = keep_replicates;

    const SimulationResult res = run_simulation(cfg);

    std::fprintf(stderr, "%-6s %6s %9s %12s %12s %12s\n", "method", "used", "failures",
                 "mean_stat", "stderr", "limit");
    for (const auto& run : res.runs)
        std::fprintf(stderr, "%-6s %6d %9d %12s %12s %12s\n", method_name(run.method).c_str(),
                     run.used, run.failures, fmt(run.mean_stat).c_str(),
                     fmt(run.stderr_stat).c_str(), fmt(run.limit).c_str());
    for (const auto& pr : res.pairs)
        std::fprintf(stderr, "ARE[%s,%s] finite=%s asymptotic=%s\n",
                     method_name(pr.a).c_str(), method_name(pr.b).c_str(),
                     fmt(pr.finite).c_str(), fmt(pr.asymptotic).c_str());

    const EmitFormat f = parse_format(o.format);
    if (o.out.empty()) {
        if (f == EmitFormat::csv)
            write_csv(res, std::cout);
        else
            write_json(res, std::cout);
    } else {
        emit(res, f, o.out);
    }
    return 0;
}

int cmd_are(const CommonOpts& o, const std::string& nl2) {
    const bool finite = o.mode == "finite";
    const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(o.nonlinearity), o.a);
    const MomentSet m1 = moment_set(parse_dist_spec(o.dist1), nl);
    const MomentSet m2 = moment_set(parse_dist_spec(o.dist2), nl);

    const std::pair<Method, Method> pairs[3] = {{Method::sym2, Method::sym},
                                                {Method::sym2, Method::defl},
                                                {Method::sym, Method::defl}};
    double finite_vals[3] = {};
    if (finite) {
        SimulationConfig cfg;
        cfg.dists = {o.dist1, o.dist2};
        cfg.n = o.n;
        cfg.M = o.M > 0 ? o.M : 1000;
        cfg.nonlinearity = o.nonlinearity;
        cfg.a = o.a;
        cfg.master_seed = o.seed;
        cfg.tol = o.tol;
        cfg.max_iter = o.max_iter;
        const SimulationResult res = run_simulation(cfg);
        for (int i = 0; i < 3; ++i)
            for (const auto& pr : res.pairs)
                if (pr.a == pairs[i].first && pr.b == pairs[i].second) finite_vals[i] = pr.finite;
    }

    for (int i = 0; i < 3; ++i) {
        double v;
        try {
            v = are_from_moments(pairs[i].first, pairs[i].second, m1, m2);
        } catch (const identifiability_error&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        std::printf("ARE[%s,%s] = %s", method_name(pairs[i].first).c_str(),
                    method_name(pairs[i].second).c_str(), fmt(v).c_str());
        if (finite) std::printf("   finite = %s", fmt(finite_vals[i]).c_str());
        std::printf("\n");
    }

    if (!o.out.empty()) {
        std::vector<std::string> nls{o.nonlinearity};
        if (!nl2.empty()) nls.push_back(nl2);
        const AreTable table = are_table({o.dist1, o.dist2}, nls, o.a, Method::sym2, Method::sym,
                                         o.n, finite ? (o.M > 0 ? o.M : 1000) : 0, o.seed);
        emit(table, parse_format(o.format), o.out);
    }
    return 0;
}

int cmd_contour(const CommonOpts& o, const std::vector<double>& shapes,
                const std::string& family, const std::string& method_a,
                const std::string& method_b) {
    const bool finite = o.mode == "finite";
    const ContourGrid grid =
        contour_grid(parse_family(family), shapes, parse_method(method_a),
                     parse_method(method_b), o.nonlinearity, o.a, finite, o.n,
                     finite ? (o.M > 0 ? o.M : 200) : 0, o.seed);
    const EmitFormat f = parse_format(o.format);
    if (o.out.empty()) {
        if (f == EmitFormat::csv)
            write_csv(grid, std::cout);
        else
            write_json(grid, std::cout);
    } else {
        emit(grid, f, o.out);
    }
    return 0;
}

int cmd_estimate(const CommonOpts& o, const std::string& in_path, const std::string& method) {
    // Input rows are observations; internally components live on rows.
    const Eigen::MatrixXd obs = read_csv_matrix(in_path);
    const DataMatrix data(obs.transpose());
    const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(o.nonlinearity), o.a);
    const Method m = parse_method(method);
    const EstimatorOptions opts{o.tol, o.max_iter};

    Eigen::MatrixXd U0;
    if (m == Method::defl) {
        const InitialRotation init = initial_rotation(data, nl, o.seed);
        if (init.fallback)
            std::fprintf(stderr, "note: preliminary estimate failed, using a random start\n");
        U0 = init.U0;
    } else {
        Rng rng(o.seed);
        U0 = random_orthogonal(static_cast<int>(data.p()), rng);
    }

    const UnmixingEstimate est = estimate(data, nl, m, U0, opts);
    std::fprintf(stderr, "method=%s converged=%s iterations=%d residual=%s\n",
                 method_name(est.method).c_str(), est.converged ? "yes" : "no", est.iterations,
                 fmt(est.residual).c_str());
    if (o.out.empty()) {
        write_json(est, std::cout);
    } else {
        std::ofstream out(o.out);
        if (!out) throw std::runtime_error("cannot open '" + o.out + "' for writing");
        write_json(est, out);
    }
    return est.converged ? 0 : 2;
}

int cmd_mdi(const std::string& gamma_path, const std::string& omega_path, std::size_t n) {
    const Eigen::MatrixXd Gamma = read_csv_matrix(gamma_path);
    const Eigen::MatrixXd Omega = read_csv_matrix(omega_path);
    const double d = minimum_distance_index(Gamma, Omega);
    std::printf("D = %.17g\n", d);
    if (n > 0)
        std::printf("n(p-1)D^2 = %.17g\n", scaled_mdi_statistic(Gamma, Omega, n));
    return 0;
}

int cmd_check_g(const CommonOpts& o, int grid) {
    const Nonlinearity nl = Nonlinearity::make(parse_nl_kind(o.nonlinearity), o.a);
    const GConditionReport rep =
        check_g_conditions(parse_dist_spec(o.dist1), parse_dist_spec(o.dist2), nl, grid);

    std::printf("nu1 = %s, nu2 = %s, grid = %d\n", fmt(rep.nu1).c_str(), fmt(rep.nu2).c_str(),
                rep.grid);
    auto line = [](const char* name, const ConditionCheck& c) {
        std::printf("%-5s %s (worst margin %.6g at theta %.6g)\n", name,
                    c.holds ? "holds" : "VIOLATED", c.worst_margin, c.worst_theta);
    };
    line("def", rep.def);
    line("sym", rep.sym);
    line("sym2", rep.sym2);

    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) throw std::runtime_error("cannot open '" + o.out + "' for writing");
        write_json(rep, out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FastICA unmixing estimators, asymptotic efficiencies, and Monte Carlo "
                 "benchmarks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value file mirroring the flags; flags override it");

    CommonOpts sim_o, are_o, con_o, est_o, chk_o;

    auto* sim = app.add_subcommand("simulate", "Monte Carlo replicates of n(p-1)D^2");
    std::vector<std::string> sim_dists, sim_methods;
    std::string sim_omega;
    int sim_threads = 1;
    bool sim_keep = false;
    sim->add_option("--dist", sim_dists, "Source spec, repeat once per component");
    add_dist_pair(sim, sim_o, false);
    sim->add_option("--method", sim_methods, "Estimator: defl, sym, sym2 (repeatable)");
    add_nl(sim, sim_o);
    sim->add_option("--n", sim_o.n, "Sample size")->default_val(1000);
    sim->add_option("--M", sim_o.M, "Replicates")->default_val(1000);
    sim->add_option("--seed", sim_o.seed, "Master seed")->default_val(1);
    add_estimation(sim, sim_o);
    sim->add_option("--omega", sim_omega, "CSV mixing matrix (default identity)");
    sim->add_option("--threads", sim_threads, "Worker threads")->default_val(1);
    sim->add_flag("--keep-replicates", sim_keep, "Keep per-replicate statistics in the output");
    add_output(sim, sim_o);

    auto* are_cmd = app.add_subcommand("are", "Pairwise asymptotic relative efficiencies");
    std::string are_nl2;
    add_dist_pair(are_cmd, are_o, true);
    add_nl(are_cmd, are_o);
    are_cmd->add_option("--nl2", are_nl2, "Second contrast for the emitted table's lower triangle");
    are_cmd->add_option("--mode", are_o.mode, "asymptotic or finite")->default_val("asymptotic");
    are_cmd->add_option("--n", are_o.n, "Sample size (finite mode)")->default_val(1000);
    are_cmd->add_option("--M", are_o.M, "Replicates (finite mode)")->default_val(0);
    are_cmd->add_option("--seed", are_o.seed, "Master seed")->default_val(1);
    add_estimation(are_cmd, are_o);
    add_output(are_cmd, are_o);

    auto* con = app.add_subcommand("contour", "Efficiency surface over a shape grid");
    std::vector<double> con_shapes;
    std::string con_family = "ep", con_ma = "sym2", con_mb = "sym";
    con->add_option("--family", con_family, "Distribution family: ep, gamma")->default_val("ep");
    con->add_option("--shapes", con_shapes, "Shape grid values")->required()->delimiter(',');
    con->add_option("--method-a", con_ma, "Numerator method")->default_val("sym2");
    con->add_option("--method-b", con_mb, "Denominator method")->default_val("sym");
    add_nl(con, con_o);
    con->add_option("--mode", con_o.mode, "asymptotic or finite")->default_val("asymptotic");
    con->add_option("--n", con_o.n, "Sample size (finite mode)")->default_val(1000);
    con->add_option("--M", con_o.M, "Replicates per cell (finite mode)")->default_val(0);
    con->add_option("--seed", con_o.seed, "Master seed")->default_val(1);
    add_output(con, con_o);

    auto* est = app.add_subcommand("estimate", "Unmix one dataset");
    std::string est_in, est_method = "sym2";
    est->add_option("--in", est_in, "CSV with one observation per row")->required();
    est->add_option("--method", est_method, "Estimator: defl, sym, sym2")->default_val("sym2");
    add_nl(est, est_o);
    add_estimation(est, est_o);
    est->add_option("--seed", est_o.seed, "Seed for the starting rotation")->default_val(1);
    est->add_option("--out", est_o.out, "JSON output path (stdout when omitted)");

    auto* mdi_cmd = app.add_subcommand("mdi", "Minimum distance index of an estimate");
    std::string mdi_gamma, mdi_omega;
    std::size_t mdi_n = 0;
    mdi_cmd->add_option("--gamma", mdi_gamma, "CSV unmixing estimate")->required();
    mdi_cmd->add_option("--omega", mdi_omega, "CSV true mixing matrix")->required();
    mdi_cmd->add_option("--n", mdi_n, "Sample size for the scaled statistic");

    auto* chk = app.add_subcommand("check-g", "Separation conditions over plane rotations");
    int chk_grid = 721;
    add_dist_pair(chk, chk_o, true);
    add_nl(chk, chk_o);
    chk->add_option("--grid", chk_grid, "Rotation grid points")->default_val(721);
    chk->add_option("--out", chk_o.out, "JSON report path");

    try {
        app.parse(argc, argv);
        if (sim->parsed())
            return cmd_simulate(sim_o, sim_dists, sim_methods, sim_omega, sim_threads, sim_keep);
        if (are_cmd->parsed()) return cmd_are(are_o, are_nl2);
        if (con->parsed()) return cmd_contour(con_o, con_shapes, con_family, con_ma, con_mb);
        if (est->parsed()) return cmd_estimate(est_o, est_in, est_method);
        if (mdi_cmd->parsed()) return cmd_mdi(mdi_gamma, mdi_omega, mdi_n);
        if (chk->parsed()) return cmd_check_g(chk_o, chk_grid);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

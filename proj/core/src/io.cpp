#include "fastica/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace fastica {

using nlohmann::json;

const char* library_version() { return "0.1.0"; }

EmitFormat parse_format(const std::string& name) {
    if (name == "csv") return EmitFormat::csv;
    if (name == "json") return EmitFormat::json;
    throw std::invalid_argument("unknown format '" + name + "' (expected csv, json)");
}

namespace {

// 17 significant digits round-trip doubles exactly; NaN prints empty.
std::string field(double x) {
    if (std::isnan(x)) return {};
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json num_or_null(double x) {
    if (std::isnan(x)) return nullptr;
    return x;
}

json config_json(const SimulationConfig& cfg) {
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(method_name(m));
    json omega = nullptr;
    if (cfg.Omega.size() != 0) {
        omega = json::array();
        for (Eigen::Index r = 0; r < cfg.Omega.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < cfg.Omega.cols(); ++c) row.push_back(cfg.Omega(r, c));
            omega.push_back(row);
        }
    }
    return json{{"dists", cfg.dists},
                {"n", cfg.n},
                {"M", cfg.M},
                {"methods", methods},
                {"nonlinearity", cfg.nonlinearity},
                {"a", cfg.a},
                {"Omega", omega},
                {"master_seed", cfg.master_seed},
                {"tol", cfg.tol},
                {"max_iter", cfg.max_iter}};
}

} // namespace

void write_csv(const SimulationResult& result, std::ostream& out) {
    out << "record,method_a,method_b,used,failures,mean_stat,stderr_stat,limit,"
           "finite_are,asymptotic_are\n";
    for (const auto& run : result.runs)
        out << "method," << method_name(run.method) << ",," << run.used << ',' << run.failures
            << ',' << field(run.mean_stat) << ',' << field(run.stderr_stat) << ','
            << field(run.limit) << ",,\n";
    for (const auto& pr : result.pairs)
        out << "pair," << method_name(pr.a) << ',' << method_name(pr.b) << ",,,,,,"
            << field(pr.finite) << ',' << field(pr.asymptotic) << '\n';
}

void write_json(const SimulationResult& result, std::ostream& out) {
    json methods = json::array();
    for (const auto& run : result.runs) {
        json jr{{"method", method_name(run.method)},
                {"used", run.used},
                {"failures", run.failures},
                {"mean_stat", num_or_null(run.mean_stat)},
                {"stderr_stat", num_or_null(run.stderr_stat)},
                {"limit", num_or_null(run.limit)}};
        if (!run.stats.empty()) {
            json stats = json::array();
            for (double v : run.stats) stats.push_back(num_or_null(v));
            jr["stats"] = stats;
        }
        methods.push_back(jr);
    }
    json pairs = json::array();
    for (const auto& pr : result.pairs)
        pairs.push_back(json{{"a", method_name(pr.a)},
                             {"b", method_name(pr.b)},
                             {"finite", num_or_null(pr.finite)},
                             {"asymptotic", num_or_null(pr.asymptotic)}});
    const json doc{{"config", config_json(result.config)},
                   {"summary", json{{"methods", methods}, {"pairs", pairs}}},
                   {"seed", result.config.master_seed},
                   {"version", library_version()}};
    out << doc.dump(2) << '\n';
}

void write_csv(const AreTable& table, std::ostream& out) {
    out << "dist1,dist2,nl,value\n";
    const std::size_t K = table.dists.size();
    const std::size_t lower = table.nls.size() > 1 ? 1 : 0;
    for (std::size_t r = 0; r < K; ++r)
        for (std::size_t c = 0; c < K; ++c) {
            const std::string& nl = table.nls[r <= c ? 0 : lower];
            out << table.dists[r] << ',' << table.dists[c] << ',' << nl << ','
                << field(table.cells[r][c].value) << '\n';
            if (r == c && !std::isnan(table.cells[r][c].value_alt))
                out << table.dists[r] << ',' << table.dists[c] << ',' << table.nls[lower] << ','
                    << field(table.cells[r][c].value_alt) << '\n';
        }
}

void write_json(const AreTable& table, std::ostream& out) {
    const std::size_t K = table.dists.size();
    const std::size_t lower = table.nls.size() > 1 ? 1 : 0;
    json cells = json::array();
    for (std::size_t r = 0; r < K; ++r)
        for (std::size_t c = 0; c < K; ++c) {
            json cell{{"row", r},
                      {"col", c},
                      {"dist1", table.dists[r]},
                      {"dist2", table.dists[c]},
                      {"nl", table.nls[r <= c ? 0 : lower]},
                      {"value", num_or_null(table.cells[r][c].value)}};
            if (r == c && !std::isnan(table.cells[r][c].value_alt))
                cell["value_alt"] = table.cells[r][c].value_alt;
            cells.push_back(cell);
        }
    const json doc{{"config", json{{"dists", table.dists},
                                   {"nls", table.nls},
                                   {"a", table.a},
                                   {"method_a", method_name(table.method_a)},
                                   {"method_b", method_name(table.method_b)},
                                   {"mode", table.finite ? "finite" : "asymptotic"},
                                   {"n", table.n},
                                   {"M", table.M}}},
                   {"cells", cells},
                   {"seed", table.seed},
                   {"version", library_version()}};
    out << doc.dump(2) << '\n';
}

void write_csv(const ContourGrid& grid, std::ostream& out) {
    out << (grid.finite ? "shape1,shape2,value,limit\n" : "shape1,shape2,value\n");
    const std::size_t K = grid.shapes.size();
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            out << field(grid.shapes[i]) << ',' << field(grid.shapes[j]) << ','
                << field(grid.value[i][j]);
            if (grid.finite) out << ',' << field(grid.limit[i][j]);
            out << '\n';
        }
}

void write_json(const ContourGrid& grid, std::ostream& out) {
    const std::size_t K = grid.shapes.size();
    json cells = json::array();
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            json cell{{"shape1", grid.shapes[i]},
                      {"shape2", grid.shapes[j]},
                      {"value", num_or_null(grid.value[i][j])}};
            if (grid.finite) cell["limit"] = num_or_null(grid.limit[i][j]);
            cells.push_back(cell);
        }
    const json doc{{"config", json{{"family", family_name(grid.family)},
                                   {"shapes", grid.shapes},
                                   {"method_a", method_name(grid.method_a)},
                                   {"method_b", method_name(grid.method_b)},
                                   {"nonlinearity", grid.nonlinearity},
                                   {"a", grid.a},
                                   {"mode", grid.finite ? "finite" : "asymptotic"},
                                   {"n", grid.n},
                                   {"M", grid.M}}},
                   {"cells", cells},
                   {"seed", grid.seed},
                   {"version", library_version()}};
    out << doc.dump(2) << '\n';
}

void write_json(const UnmixingEstimate& est, std::ostream& out) {
    json gamma = json::array();
    for (Eigen::Index r = 0; r < est.Gamma.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < est.Gamma.cols(); ++c) row.push_back(est.Gamma(r, c));
        gamma.push_back(row);
    }
    const json doc{{"p", est.Gamma.rows()},
                   {"Gamma", gamma},
                   {"method", method_name(est.method)},
                   {"iterations", est.iterations},
                   {"residual", est.residual},
                   {"converged", est.converged},
                   {"version", library_version()}};
    out << doc.dump(2) << '\n';
}

void write_json(const GConditionReport& report, std::ostream& out) {
    auto check = [](const ConditionCheck& c) {
        return json{{"holds", c.holds},
                    {"worst_theta", c.worst_theta},
                    {"worst_margin", c.worst_margin}};
    };
    const json doc{{"nu1", report.nu1},
                   {"nu2", report.nu2},
                   {"grid", report.grid},
                   {"def", check(report.def)},
                   {"sym", check(report.sym)},
                   {"sym2", check(report.sym2)},
                   {"version", library_version()}};
    out << doc.dump(2) << '\n';
}

namespace {

template <typename T>
void emit_impl(const T& value, EmitFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (format == EmitFormat::csv)
        write_csv(value, out);
    else
        write_json(value, out);
    out.flush();
    if (!out.good()) throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace

void emit(const SimulationResult& result, EmitFormat format, const std::string& path) {
    emit_impl(result, format, path);
}
void emit(const AreTable& table, EmitFormat format, const std::string& path) {
    emit_impl(table, format, path);
}
void emit(const ContourGrid& grid, EmitFormat format, const std::string& path) {
    emit_impl(grid, format, path);
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": not a number: '" + cell + "'");
            }
            while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
                ++pos;
            if (pos != cell.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": trailing characters in '" + cell + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty())
        throw std::runtime_error(path + ": no numeric data");

    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows.front().size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

} // namespace fastica

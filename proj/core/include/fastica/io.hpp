#ifndef FASTICA_IO_HPP
#define FASTICA_IO_HPP

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "fastica/asymptotics.hpp"
#include "fastica/estimators.hpp"
#include "fastica/harness.hpp"

namespace fastica {

const char* library_version();

// Strict numeric CSV (comma separated, no header); rows must have equal
// length. Errors carry the path.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

enum class EmitFormat { csv, json };
EmitFormat parse_format(const std::string& name);

// CSV writers put one header row first and print numbers with 17 significant
// digits; NaN becomes an empty field. JSON writers emit the stable layout
// {config, summary|cells, seed, version} with NaN serialized as null.
void write_csv(const SimulationResult& result, std::ostream& out);
void write_json(const SimulationResult& result, std::ostream& out);
void write_csv(const AreTable& table, std::ostream& out);
void write_json(const AreTable& table, std::ostream& out);
void write_csv(const ContourGrid& grid, std::ostream& out);
void write_json(const ContourGrid& grid, std::ostream& out);

// Unmixing estimate as JSON: Gamma flattened row-major plus method,
// iterations, residual, converged.
void write_json(const UnmixingEstimate& est, std::ostream& out);

void write_json(const GConditionReport& report, std::ostream& out);

void emit(const SimulationResult& result, EmitFormat format, const std::string& path);
void emit(const AreTable& table, EmitFormat format, const std::string& path);
void emit(const ContourGrid& grid, EmitFormat format, const std::string& path);

} // namespace fastica

#endif

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "landauer/lindblad.hpp"
#include "landauer/thermo.hpp"

namespace landauer {

/// Column-oriented table read back from one of our CSV files. Empty fields
/// become NaN; the flags column is kept as text.
struct CsvTable {
  std::vector<std::string> columns;
  std::map<std::string, std::vector<double>> numeric;
  std::vector<std::string> flags;

  std::size_t rows() const;
  bool has(const std::string& column) const { return numeric.count(column) != 0; }
  const std::vector<double>& at(const std::string& column) const;
};

/// 15 significant digits; NaN becomes an empty field.
std::string format_number(double value);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::vector<double>& energies, const std::vector<double>& entropies,
                          const std::vector<double>& diagonal_entropies,
                          const std::vector<double>& fidelities);

void write_undriven_csv(const std::filesystem::path& path, const UndrivenReport& report);
void write_driven_csv(const std::filesystem::path& path, const DrivenReport& report);
void write_nlp_csv(const std::filesystem::path& path, const std::vector<NlpComparison>& rows);

/// Throws SchemaError on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace landauer

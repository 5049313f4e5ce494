#include "landauer/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <cstdlib>

#include "landauer/error.hpp"

namespace landauer {

namespace {

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k != 0) out_ << ',';
      out_ << fields[k];
    }
    out_ << "\r\n";  // RFC 4180 line break
  }

 private:
  std::ofstream out_;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::size_t CsvTable::rows() const { return flags.size(); }

const std::vector<double>& CsvTable::at(const std::string& column) const {
  const auto it = numeric.find(column);
  if (it == numeric.end()) throw Error(ErrorCode::SchemaError, "missing column '" + column + "'");
  return it->second;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::vector<double>& energies, const std::vector<double>& entropies,
                          const std::vector<double>& diagonal_entropies,
                          const std::vector<double>& fidelities) {
  std::vector<std::string> header{"t", "E_S", "S", "S_diag", "Coh", "Q", "W", "trace_drift", "min_eigenvalue"};
  const bool with_fidelity = !fidelities.empty();
  if (with_fidelity) header.emplace_back("bell_fidelity");
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    std::vector<std::string> row{format_number(traj.times[k]),
                                 format_number(energies[k]),
                                 format_number(entropies[k]),
                                 format_number(diagonal_entropies[k]),
                                 format_number(diagonal_entropies[k] - entropies[k]),
                                 format_number(traj.heat[k]),
                                 format_number(traj.work[k]),
                                 format_number(traj.trace_drift[k]),
                                 format_number(traj.min_eigenvalue[k])};
    if (with_fidelity) row.push_back(format_number(fidelities[k]));
    csv.row(row);
  }
}

void write_undriven_csv(const std::filesystem::path& path, const UndrivenReport& report) {
  CsvWriter csv(path, {"t", "E_S", "S", "S_diag", "Coh", "Q", "dE_R", "gap_P", "D_direct", "dE_in", "Q_u",
                       "lp_lower", "dS", "dS_diag", "dCoh", "TR_dCoh", "mTR_dS_diag", "flags"});
  for (const auto& b : report.samples) {
    csv.row({format_number(b.t), format_number(b.E_S), format_number(b.S), format_number(b.S_diag),
             format_number(b.Coh), format_number(b.Q), format_number(b.dE_R), format_number(b.gap_P),
             format_number(b.D_direct), format_number(b.dE_in), format_number(b.Q_u),
             format_number(b.lp_lower), format_number(b.dS), format_number(b.dS_diag), format_number(b.dCoh),
             format_number(b.TR_dCoh), format_number(b.mTR_dS_diag), flags_to_string(b.flags)});
  }
}

void write_driven_csv(const std::filesystem::path& path, const DrivenReport& report) {
  CsvWriter csv(path, {"t", "E_S", "S", "S_diag", "Coh", "Q", "W", "beta_R_t", "C_t", "dE_R_tilde", "gap",
                       "D_inst", "Qu_tilde", "upper", "lp_lower", "dE", "dS", "dS_diag", "dCoh", "TR0_dCoh",
                       "mTR0_dS_diag", "flags"});
  for (const auto& b : report.samples) {
    csv.row({format_number(b.t), format_number(b.E_S), format_number(b.S), format_number(b.S_diag),
             format_number(b.Coh), format_number(b.Q), format_number(b.W), format_number(b.beta_R_t),
             format_number(b.C_t), format_number(b.dE_R_tilde), format_number(b.gap), format_number(b.D_inst),
             format_number(b.Qu_tilde), format_number(b.upper), format_number(b.lp_lower), format_number(b.dE),
             format_number(b.dS), format_number(b.dS_diag), format_number(b.dCoh), format_number(b.TR0_dCoh),
             format_number(b.mTR0_dS_diag), flags_to_string(b.flags)});
  }
}

void write_nlp_csv(const std::filesystem::path& path, const std::vector<NlpComparison>& rows) {
  CsvWriter csv(path, {"t", "F_neq_T", "F_eq_t", "slack_instantaneous", "slack_driven", "slack_undriven"});
  for (const auto& c : rows) {
    csv.row({format_number(c.t), format_number(c.F_neq_T), format_number(c.F_eq_t), format_number(c.slack_instantaneous),
             format_number(c.slack_driven), format_number(c.slack_undriven)});
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  auto strip = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaError, path.string() + " is empty");
  strip(line);
  table.columns = split_csv_line(line);
  if (table.columns.empty() || table.columns.front() != "t") {
    throw Error(ErrorCode::SchemaError, path.string() + ": first column must be 't'");
  }
  for (const auto& c : table.columns) {
    if (c != "flags") table.numeric[c];
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != table.columns.size()) {
      throw Error(ErrorCode::SchemaError, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(table.columns.size()) + " fields");
    }
    std::string flags;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto& name = table.columns[k];
      if (name == "flags") {
        flags = fields[k];
        continue;
      }
      double value = std::numeric_limits<double>::quiet_NaN();
      if (!fields[k].empty()) {
        char* end = nullptr;
        value = std::strtod(fields[k].c_str(), &end);
        if (end != fields[k].c_str() + fields[k].size()) {
          throw Error(ErrorCode::SchemaError, path.string() + ":" + std::to_string(line_no) +
                                                  ": bad number '" + fields[k] + "'");
        }
      }
      table.numeric[name].push_back(value);
    }
    table.flags.push_back(flags);
  }
  return table;
}

}  // namespace landauer

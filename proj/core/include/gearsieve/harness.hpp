#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gearsieve/constellation.hpp"
#include "gearsieve/correlation.hpp"
#include "gearsieve/fourier.hpp"

namespace gearsieve::harness {

enum class OutputFormat { csv, json };

OutputFormat parse_format(std::string_view text);

struct Conventions {
  /// Source of mu_N in the variance decomposition table.
  MeanSource table2_mean_source = MeanSource::observed;
  HConvention h_convention = HConvention::appendix_c;
  /// Adds twins_inclusive / twins_strict columns to table 1.
  bool diagnostic = false;
};

struct RunConfig {
  std::vector<std::int64_t> m0_list;
  Constellation tuple = Constellation::twins();
  std::int64_t anchor = 7;
  Conventions conventions;
  unsigned workers = 1;
  std::filesystem::path output_dir = ".";
  std::vector<OutputFormat> formats = {OutputFormat::csv};
};

/// Throws std::invalid_argument: empty or < 5 m0 entries, workers == 0, bad
/// anchor, inadmissible tuple.
void validate(const RunConfig& cfg);

/// m0 ladder of each table in the reference runs.
std::vector<std::int64_t> default_table1_m0();
std::vector<std::int64_t> default_table2_m0();
std::vector<std::int64_t> default_table3_m0();
std::vector<std::int64_t> default_figure_m0();

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view key) const;
  const Cell& at(std::size_t row, std::string_view key) const;
  double real(std::size_t row, std::string_view key) const;
  std::int64_t integer(std::size_t row, std::string_view key) const;
};

/// Signal statistics of S_C over each window [anchor, m0^2).
/// Columns: m0,window,twins,mean,var,ratio (+ twins_inclusive,twins_strict).
Table run_table1(const RunConfig& cfg);

/// Columns: m0,L,twins,mu_N,sigma_diag,sigma_off,variance.
Table run_table2(const RunConfig& cfg);

struct Table3Result {
  /// Columns: m0,L,weighted_sum,theory,rel_error_pct.
  Table table;
  DecayFit fit;
  /// Columns: convention,alpha,intercept.
  Table fit_table;
};

Table3Result run_table3(const RunConfig& cfg);

/// fig1_fano (m0,fano_observed,fano_theoretical), fig2_count
/// (m0,count_observed,count_theory), fig3_cv (m0,L,cv_observed,cv_reference).
std::vector<Table> run_figures(const RunConfig& cfg);

/// Integers verbatim, reals with 6 significant digits.
std::string format_cell(const Cell& cell);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Parses CSV produced by to_csv. Cells read as integer, then real, then text.
/// Throws std::invalid_argument when the header differs from `columns`, a row
/// has the wrong width or a numeric cell is not finite.
Table parse_csv(std::string_view text, std::string name, const std::vector<std::string>& columns);

/// Writes <dir>/<name>.<ext> for each format; creates dir. Throws IoError.
std::vector<std::filesystem::path> write_table(const Table& table, const std::filesystem::path& dir,
                                               std::span<const OutputFormat> formats);

}  // namespace gearsieve::harness

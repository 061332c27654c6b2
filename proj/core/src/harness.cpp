#include "gearsieve/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "gearsieve/errors.hpp"
#include "gearsieve/signal.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace gearsieve::harness {

namespace {

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Runs job(m0) for every m0 in ascending order, `workers` at a time; rows come
// back in m0 order.
template <class Job>
auto sweep(const RunConfig& cfg, Job job) {
  validate(cfg);
  const auto ladder = sorted_unique(cfg.m0_list);
  std::vector<decltype(job(ladder.front()))> out(ladder.size());
  detail::run_indexed(ladder.size(), cfg.workers, [&](std::size_t i) { out[i] = job(ladder[i]); });
  return out;
}

std::int64_t window_end(std::int64_t m0) { return m0 * m0; }

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

bool parse_real(std::string_view s, double& out) {
  if (s.empty()) {
    return false;
  }
  const std::string text(s);
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size();
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  file << text;
  file.flush();
  if (!file) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") {
    return OutputFormat::csv;
  }
  if (text == "json") {
    return OutputFormat::json;
  }
  throw std::invalid_argument("unknown format: " + std::string(text));
}

void validate(const RunConfig& cfg) {
  if (cfg.m0_list.empty()) {
    throw std::invalid_argument("m0 list is empty");
  }
  for (const std::int64_t m0 : cfg.m0_list) {
    if (m0 < 5 || m0 > 31'622) {
      throw std::invalid_argument("m0 out of range [5, 31622]: " + std::to_string(m0));
    }
    if (cfg.anchor >= window_end(m0)) {
      throw std::invalid_argument("anchor must lie below m0^2 for m0 = " + std::to_string(m0));
    }
  }
  if (cfg.workers == 0) {
    throw std::invalid_argument("workers must be >= 1");
  }
  if (cfg.anchor < 5 || cfg.anchor % 2 == 0 || cfg.anchor % 3 == 0) {
    throw std::invalid_argument("anchor must be >= 5 and coprime to 6");
  }
  if (!is_admissible(cfg.tuple).admissible) {
    throw std::invalid_argument("inadmissible tuple " + cfg.tuple.to_string());
  }
  if (cfg.formats.empty()) {
    throw std::invalid_argument("no output format selected");
  }
}

std::vector<std::int64_t> default_table1_m0() { return {30, 50, 100, 500, 1000, 2000, 3000, 4000, 5000}; }
std::vector<std::int64_t> default_table2_m0() { return {30, 50, 100, 200, 500, 1000, 2000, 3000, 4000, 5000}; }
std::vector<std::int64_t> default_table3_m0() { return {30, 50, 100, 200, 500, 1000}; }
std::vector<std::int64_t> default_figure_m0() { return {30, 50, 100, 200, 500, 1000, 2000, 3000, 4000, 5000}; }

std::size_t Table::column(std::string_view key) const {
  const auto it = std::find(columns.begin(), columns.end(), key);
  if (it == columns.end()) {
    throw std::out_of_range("table " + name + " has no column " + std::string(key));
  }
  return static_cast<std::size_t>(it - columns.begin());
}

const Cell& Table::at(std::size_t row, std::string_view key) const { return rows.at(row).at(column(key)); }

double Table::real(std::size_t row, std::string_view key) const {
  const Cell& cell = at(row, key);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return static_cast<double>(*i);
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    return *d;
  }
  throw std::invalid_argument("column " + std::string(key) + " is not numeric");
}

std::int64_t Table::integer(std::size_t row, std::string_view key) const {
  const Cell& cell = at(row, key);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return *i;
  }
  throw std::invalid_argument("column " + std::string(key) + " is not an integer");
}

Table run_table1(const RunConfig& cfg) {
  struct Row {
    std::int64_t m0;
    ScanSummary scan;
    std::int64_t inclusive;
  };
  const bool diagnostic = cfg.conventions.diagnostic;
  const auto rows = sweep(cfg, [&](std::int64_t m0) {
    const SieveBasis basis = basis_up_to(m0);
    const Window window = Window::certification(cfg.anchor, m0);
    Row row{m0, scan_window(basis, window, cfg.tuple), 0};
    if (diagnostic) {
      row.inclusive = classical_oracle_count(window, cfg.tuple);
    }
    return row;
  });

  Table table{"table1", {"m0", "window", "twins", "mean", "var", "ratio"}, {}};
  if (diagnostic) {
    table.columns.insert(table.columns.end(), {"twins_inclusive", "twins_strict"});
  }
  for (const Row& r : rows) {
    const double mean = r.scan.mean();
    const double var = r.scan.variance();
    std::vector<Cell> cells{r.m0, window_end(r.m0), r.scan.certified, mean, var, mean > 0 ? var / mean : 0.0};
    if (diagnostic) {
      cells.emplace_back(r.inclusive);
      cells.emplace_back(r.scan.certified);
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Table run_table2(const RunConfig& cfg) {
  const auto reports = sweep(cfg, [&](std::int64_t m0) {
    MomentOptions options;
    options.mean_source = cfg.conventions.table2_mean_source;
    return variance_decomposition(basis_up_to(m0), Window::certification(cfg.anchor, m0), cfg.tuple, options);
  });
  Table table{"table2", {"m0", "L", "twins", "mu_N", "sigma_diag", "sigma_off", "variance"}, {}};
  for (const MomentReport& r : reports) {
    table.rows.push_back({r.m0, r.L, r.observed_count, r.mu_N, r.sigma_diag, r.sigma_off, r.variance});
  }
  return table;
}

Table3Result run_table3(const RunConfig& cfg) {
  const HConvention convention = cfg.conventions.h_convention;
  const auto reports = sweep(cfg, [&](std::int64_t m0) { return weighted_ergodic_sum(m0, convention); });
  Table3Result out;
  out.table = Table{"table3", {"m0", "L", "weighted_sum", "theory", "rel_error_pct"}, {}};
  out.fit_table = Table{"table3_fit", {"convention", "alpha", "intercept"}, {}};
  std::vector<double> m0s;
  std::vector<double> errors;
  for (const EquidistReport& r : reports) {
    out.table.rows.push_back({r.m0, r.L, r.weighted_sum, r.theory, r.rel_error_pct});
    m0s.push_back(static_cast<double>(r.m0));
    errors.push_back(r.rel_error_pct);
  }
  if (m0s.size() >= 3) {
    out.fit = fit_decay_exponent(m0s, errors);
    out.fit_table.rows.push_back({std::string(to_string(convention)), out.fit.alpha, out.fit.intercept});
  }
  return out;
}

std::vector<Table> run_figures(const RunConfig& cfg) {
  struct Row {
    std::int64_t m0;
    std::int64_t L;
    double fano;
    std::int64_t count;
    double theory;
    double cv;
  };
  const auto rows = sweep(cfg, [&](std::int64_t m0) {
    const SieveBasis basis = basis_up_to(m0);
    const Window window = Window::certification(cfg.anchor, m0);
    const ScanSummary scan = scan_window(basis, window, cfg.tuple);
    const MomentReport moments = variance_decomposition(basis, window, cfg.tuple);
    const double mean = scan.mean();
    return Row{m0,
               window.length(),
               mean > 0 ? scan.variance() / mean : 0.0,
               scan.certified,
               moments.mean_field,
               moments.cv};
  });
  Table fano{"fig1_fano", {"m0", "fano_observed", "fano_theoretical"}, {}};
  Table count{"fig2_count", {"m0", "count_observed", "count_theory"}, {}};
  Table cv{"fig3_cv", {"m0", "L", "cv_observed", "cv_reference"}, {}};
  for (const Row& r : rows) {
    fano.rows.push_back({r.m0, r.fano, fano_theoretical(r.m0)});
    count.rows.push_back({r.m0, r.count, r.theory});
    cv.rows.push_back({r.m0, r.L, r.cv, 1.0 / std::sqrt(static_cast<double>(r.L))});
  }
  return {fano, count, cv};
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    return std::to_string(*i);
  }
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) {
      throw InvariantError("non-finite table cell");
    }
    return fmt::format("{:.6g}", *d);
  }
  return std::get<std::string>(cell);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? "," : "") + format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string text = format_cell(row[i]);
      std::int64_t iv = 0;
      double dv = 0;
      if (std::holds_alternative<std::string>(row[i])) {
        obj[table.columns[i]] = text;
      } else if (std::holds_alternative<std::int64_t>(row[i]) && parse_int(text, iv)) {
        obj[table.columns[i]] = iv;
      } else if (parse_real(text, dv)) {
        obj[table.columns[i]] = dv;
      }
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc;
  doc["table"] = table.name;
  doc["columns"] = table.columns;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Table parse_csv(std::string_view text, std::string name, const std::vector<std::string>& columns) {
  Table table{std::move(name), columns, {}};
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || split(line, ',') != columns) {
    throw std::invalid_argument("CSV header does not match the schema of " + table.name);
  }
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != columns.size()) {
      throw std::invalid_argument("CSV row width mismatch in " + table.name);
    }
    std::vector<Cell> row;
    for (const auto& cell : cells) {
      std::int64_t iv = 0;
      double dv = 0;
      if (parse_int(cell, iv)) {
        row.emplace_back(iv);
      } else if (parse_real(cell, dv)) {
        if (!std::isfinite(dv)) {
          throw std::invalid_argument("non-finite cell in " + table.name);
        }
        row.emplace_back(dv);
      } else {
        row.emplace_back(cell);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::filesystem::path> write_table(const Table& table, const std::filesystem::path& dir,
                                               std::span<const OutputFormat> formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  for (const OutputFormat format : formats) {
    const bool csv = format == OutputFormat::csv;
    const auto path = dir / (table.name + (csv ? ".csv" : ".json"));
    write_file(path, csv ? to_csv(table) : to_json(table));
    written.push_back(path);
  }
  return written;
}

}  // namespace gearsieve::harness

// gearsieve: command-line front end for the constellation sieve laboratory.

#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gearsieve/correlation.hpp"
#include "gearsieve/diophantine.hpp"
#include "gearsieve/errors.hpp"
#include "gearsieve/fourier.hpp"
#include "gearsieve/harness.hpp"
#include "gearsieve/primes.hpp"
#include "gearsieve/signal.hpp"
#include "json.hpp"

namespace gs = gearsieve;
namespace hs = gearsieve::harness;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kInvalidConfig = 2, kIoFailure = 3, kInvariant = 4 };

std::string real(double v) { return fmt::format("{:.6g}", v); }

// Reals as 6-significant-digit numbers, matching the table files.
double rounded(double v) { return std::stod(real(v)); }

void print_json(const json& doc) { std::cout << doc.dump(2) << '\n'; }

struct SweepFlags {
  std::vector<std::int64_t> m0_list;
  std::string tuple = "0,2";
  std::int64_t anchor = 7;
  unsigned workers = 1;
  std::string out = ".";
  std::vector<std::string> formats = {"csv"};
  std::string convention = "appendix_c";
  std::string mean_source = "observed";
  bool diagnostic = false;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--m0-list", f.m0_list, "m0 values (comma separated)")->delimiter(',');
  cmd->add_option("--tuple", f.tuple, "constellation offsets, e.g. 0,2");
  cmd->add_option("--anchor", f.anchor, "window anchor P");
  cmd->add_option("--workers", f.workers, "parallel m0 jobs");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--format", f.formats, "csv and/or json")->delimiter(',');
  cmd->add_option("--convention", f.convention, "h convention: appendix_c|section4");
  cmd->add_option("--mean-source", f.mean_source, "mu_N source for table2: observed|mean_field");
  cmd->add_flag("--diagnostic", f.diagnostic, "extra twins_inclusive/twins_strict columns in table1");
}

hs::RunConfig make_config(const SweepFlags& f, std::vector<std::int64_t> fallback) {
  hs::RunConfig cfg;
  cfg.m0_list = f.m0_list.empty() ? std::move(fallback) : f.m0_list;
  cfg.tuple = gs::Constellation::parse(f.tuple);
  cfg.anchor = f.anchor;
  cfg.workers = f.workers;
  cfg.output_dir = f.out;
  cfg.formats.clear();
  for (const auto& name : f.formats) {
    cfg.formats.push_back(hs::parse_format(name));
  }
  cfg.conventions.h_convention = gs::parse_h_convention(f.convention);
  if (f.mean_source == "observed") {
    cfg.conventions.table2_mean_source = gs::MeanSource::observed;
  } else if (f.mean_source == "mean_field") {
    cfg.conventions.table2_mean_source = gs::MeanSource::mean_field;
  } else {
    throw std::invalid_argument("unknown mean source: " + f.mean_source);
  }
  cfg.conventions.diagnostic = f.diagnostic;
  hs::validate(cfg);
  return cfg;
}

void emit(const std::vector<hs::Table>& tables, const hs::RunConfig& cfg) {
  for (const auto& table : tables) {
    for (const auto& path : hs::write_table(table, cfg.output_dir, cfg.formats)) {
      std::cout << path.string() << '\n';
    }
  }
}

json moment_json(const gs::MomentReport& r) {
  json doc;
  doc["m0"] = r.m0;
  doc["L"] = r.L;
  doc["positions"] = r.positions;
  doc["observed_count"] = r.observed_count;
  doc["mean_field"] = rounded(r.mean_field);
  doc["mu_N"] = rounded(r.mu_N);
  doc["sigma_diag"] = rounded(r.sigma_diag);
  doc["sigma_off"] = rounded(r.sigma_off);
  doc["sigma_off_direct"] = r.sigma_off_direct ? json(rounded(*r.sigma_off_direct)) : json(nullptr);
  doc["sigma_off_split"] = r.sigma_off_split ? json(rounded(*r.sigma_off_split)) : json(nullptr);
  doc["variance"] = rounded(r.variance);
  doc["fano"] = rounded(r.fano);
  doc["snr"] = rounded(r.snr);
  doc["cv"] = rounded(r.cv);
  doc["chebyshev_desert_bound"] = rounded(r.chebyshev_desert_bound);
  doc["paley_zygmund_bound"] = rounded(r.paley_zygmund_bound);
  doc["dc_energy"] = rounded(r.dc_energy);
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gearsieve - Diophantine constellation sieve laboratory"};
  app.require_subcommand(1);

  std::int64_t n = 0;
  auto* seed = app.add_subcommand("seed", "canonical seed and gears of N");
  seed->add_option("N", n)->required();
  auto* prime = app.add_subcommand("prime", "structural primality of N");
  prime->add_option("N", n)->required();

  std::int64_t m0 = 0;
  std::int64_t anchor = 7;
  std::string tuple = "0,2";
  std::string survivors_path;
  std::size_t segments = 1;
  unsigned workers = 1;
  auto* scan = app.add_subcommand("scan", "certify a window [anchor, m0^2)");
  scan->add_option("--m0", m0)->required();
  scan->add_option("--anchor", anchor);
  scan->add_option("--tuple", tuple);
  scan->add_option("--survivors", survivors_path, "write survivors, one per line");
  scan->add_option("--segments", segments);
  scan->add_option("--workers", workers);

  std::int64_t p = 0;
  auto* tau_cmd = app.add_subcommand("tau", "tau_p(d) table as CSV");
  tau_cmd->add_option("--p", p)->required();
  tau_cmd->add_option("--tuple", tuple);

  std::string mean_source = "observed";
  auto* moments = app.add_subcommand("moments", "variance decomposition as JSON");
  moments->add_option("--m0", m0)->required();
  moments->add_option("--anchor", anchor);
  moments->add_option("--tuple", tuple);
  moments->add_option("--mean-source", mean_source);
  moments->add_option("--workers", workers);

  std::string convention = "appendix_c";
  auto* equidist = app.add_subcommand("equidist", "weighted ergodic sum as a CSV row");
  equidist->add_option("--m0", m0)->required();
  equidist->add_option("--convention", convention);
  equidist->add_option("--workers", workers);

  std::int64_t pmax = 0;
  auto* fourier = app.add_subcommand("fourier", "tau_p Fourier coefficients as CSV");
  fourier->add_option("--pmax", pmax)->required();

  std::int64_t even = 0;
  bool list_pairs = false;
  auto* goldbach = app.add_subcommand("goldbach", "Goldbach representations of E");
  goldbach->add_option("E", even)->required();
  goldbach->add_flag("--list", list_pairs, "include the smaller summands");

  SweepFlags t1, t2, t3, fig, fit;
  auto* table1 = app.add_subcommand("table1", "S_C signal statistics");
  add_sweep_flags(table1, t1);
  auto* table2 = app.add_subcommand("table2", "variance decomposition table");
  add_sweep_flags(table2, t2);
  auto* table3 = app.add_subcommand("table3", "equidistribution table and decay fit");
  add_sweep_flags(table3, t3);
  auto* figures = app.add_subcommand("figures", "figure data series");
  add_sweep_flags(figures, fig);
  auto* fit_cmd = app.add_subcommand("fit", "decay exponent of the equidistribution error");
  add_sweep_flags(fit_cmd, fit);

  std::vector<std::int64_t> offsets;
  auto* admissible = app.add_subcommand("admissible", "admissibility report as JSON");
  admissible->add_option("H", offsets)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*seed) {
      const auto s = gs::canonical_seed(n);
      json doc;
      doc["n"] = s.n;
      doc["n0"] = s.n0;
      doc["m0"] = s.m0;
      doc["candidate"] = gs::is_prime_candidate(s);
      json gears = json::array();
      if (s.m0 % 2 == 1) {
        for (const auto& g : gs::gear_sequence(s)) {
          gears.push_back({{"k", g.k}, {"phase", g.phase}, {"modulus", g.modulus}});
        }
      }
      doc["gears"] = gears;
      print_json(doc);
    } else if (*prime) {
      std::cout << (gs::structural_is_prime(n) ? "prime" : "composite") << '\n';
    } else if (*scan) {
      const auto c = gs::Constellation::parse(tuple);
      const auto window = gs::Window::certification(anchor, m0);
      const auto summary = gs::scan_window(gs::basis_up_to(m0), window, c,
                                           gs::ScanOptions{segments, workers, !survivors_path.empty()});
      if (!survivors_path.empty()) {
        std::ofstream file(survivors_path, std::ios::trunc);
        for (const auto v : *summary.survivors) {
          file << v << '\n';
        }
        file.flush();
        if (!file) {
          throw gs::IoError("cannot write " + survivors_path);
        }
      }
      json doc;
      doc["m0"] = m0;
      doc["anchor"] = anchor;
      doc["end"] = window.end();
      doc["tuple"] = c.to_string();
      doc["positions"] = summary.positions;
      doc["certifiable"] = summary.certifiable;
      doc["certified"] = summary.certified;
      doc["mean"] = rounded(summary.mean());
      doc["var"] = rounded(summary.variance());
      print_json(doc);
    } else if (*tau_cmd) {
      const auto c = gs::Constellation::parse(tuple);
      std::cout << "d,tau_num,tau_den,case\n";
      for (std::int64_t d = 0; d < p; ++d) {
        const auto t = gs::tau(c, p, d);
        std::cout << d << ',' << t.open << ',' << p << ',' << gs::to_string(t.label) << '\n';
      }
    } else if (*moments) {
      gs::MomentOptions options;
      options.workers = workers;
      if (mean_source == "mean_field") {
        options.mean_source = gs::MeanSource::mean_field;
      } else if (mean_source != "observed") {
        throw std::invalid_argument("unknown mean source: " + mean_source);
      }
      const auto report = gs::variance_decomposition(gs::basis_up_to(m0), gs::Window::certification(anchor, m0),
                                                     gs::Constellation::parse(tuple), options);
      print_json(moment_json(report));
    } else if (*equidist) {
      const auto r = gs::weighted_ergodic_sum(m0, gs::parse_h_convention(convention), workers);
      std::cout << "m0,L,weighted_sum,theory,rel_error_pct\n"
                << r.m0 << ',' << r.L << ',' << real(r.weighted_sum) << ',' << real(r.theory) << ','
                << real(r.rel_error_pct) << '\n';
    } else if (*fourier) {
      std::cout << "p,k,closed,dft_re,dft_im\n";
      for (const auto q : gs::primes_in(5, pmax)) {
        for (const auto& row : gs::tau_fourier(q)) {
          std::cout << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", row.p, row.k, row.closed, row.dft.real(),
                                   row.dft.imag());
        }
      }
    } else if (*goldbach) {
      const auto r = gs::goldbach_count(even, list_pairs);
      json doc;
      doc["E"] = even;
      doc["count"] = r.count;
      if (r.survivors) {
        doc["summands"] = *r.survivors;
      }
      print_json(doc);
    } else if (*table1) {
      const auto cfg = make_config(t1, hs::default_table1_m0());
      emit({hs::run_table1(cfg)}, cfg);
    } else if (*table2) {
      const auto cfg = make_config(t2, hs::default_table2_m0());
      emit({hs::run_table2(cfg)}, cfg);
    } else if (*table3) {
      const auto cfg = make_config(t3, hs::default_table3_m0());
      const auto result = hs::run_table3(cfg);
      emit({result.table, result.fit_table}, cfg);
    } else if (*figures) {
      const auto cfg = make_config(fig, hs::default_figure_m0());
      emit(hs::run_figures(cfg), cfg);
    } else if (*fit_cmd) {
      const auto cfg = make_config(fit, hs::default_table3_m0());
      std::cout << hs::to_csv(hs::run_table3(cfg).fit_table);
    } else if (*admissible) {
      const auto report = gs::is_admissible(gs::Constellation(offsets));
      json doc;
      doc["constellation"] = report.constellation.to_string();
      json per_prime = json::object();
      for (const auto& [q, w] : report.per_prime) {
        per_prime[std::to_string(q)] = w;
      }
      doc["omega"] = per_prime;
      doc["admissible"] = report.admissible;
      doc["blocking_primes"] = report.blocking_primes;
      print_json(doc);
    }
  } catch (const gs::IoError& e) {
    std::cerr << "gearsieve: " << e.what() << '\n';
    return kIoFailure;
  } catch (const gs::InvariantError& e) {
    std::cerr << "gearsieve: invariant violated: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "gearsieve: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "gearsieve: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "gearsieve: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "gearsieve: internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kOk;
}

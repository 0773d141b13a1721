#include "dephcap/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dephcap/channels.hpp"
#include "dephcap/entropy.hpp"
#include "dephcap/markov.hpp"
#include "dephcap/parallel.hpp"
#include "dephcap/qubit_squash.hpp"
#include "dephcap/sampling.hpp"

namespace dephcap::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& text, const char* what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& text, const char* what) {
  const std::string t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

std::string energy_text(const std::optional<double>& cap) { return cap ? format_number(*cap) : "inf"; }

const char* flag(bool b) { return b ? "true" : "false"; }

// ---- verify suites ----

struct SuiteResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

std::string fmt_residual(const char* label, double v) {
  std::ostringstream os;
  os << label << " = " << format_number(v);
  return os.str();
}

SuiteResult suite_kraus(std::mt19937_64& rng) {
  SuiteResult r{"kraus_completeness", true, {}};
  double worst_completeness = 0.0;
  double worst_action = 0.0;
  for (const double g : {0.05, 0.5, 1.0, 3.0, 6.0}) {
    const KrausChannel ch = dephasing_kraus(g, 8);
    worst_completeness = std::max(worst_completeness, ch.completeness_residual());
    for (int i = 0; i < 5; ++i) {
      const Eigen::MatrixXcd rho = random_density_entries(8, rng);
      worst_action = std::max(worst_action, (ch.apply(rho) - dephasing_apply(rho, g)).cwiseAbs().maxCoeff());
    }
  }
  r.pass = worst_completeness <= 1e-12 && worst_action <= 1e-10;
  r.detail = fmt_residual("max completeness residual", worst_completeness) + ", " +
             fmt_residual("max |Kraus - closed form|", worst_action);
  return r;
}

SuiteResult suite_ssa(std::mt19937_64& rng) {
  SuiteResult r{"strong_subadditivity", true, {}};
  double min_cmi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    const TripartiteState st(random_density(8, rng), {2, 2, 2});
    for (const Register c : {Register::S, Register::E, Register::F})
      min_cmi = std::min(min_cmi, conditional_mutual_information(st, c));
  }
  r.pass = min_cmi >= -1e-9;
  r.detail = fmt_residual("min CMI", min_cmi);
  return r;
}

SuiteResult suite_markov(std::mt19937_64& rng) {
  SuiteResult r{"markov_examples", true, {}};
  const std::vector<double> p = random_simplex(3, rng);
  std::vector<DensityMatrix> states;
  for (int i = 0; i < 3; ++i) states.push_back(random_density(2, rng));
  const MarkovCheck a = is_qmc(qmc_example(p, states), MarkovOrder(Register::S, Register::E, Register::F), 1e-10);
  const MarkovCheck b =
      is_qmc(qmc_example_swapped(p, states), MarkovOrder(Register::S, Register::F, Register::E), 1e-10);
  const TripartiteState sq = sqmc_example(p, states);
  const SymmetricMarkovCheck c = is_sqmc(sq, 1e-10);
  const HalvingReport h = sqmci_halving_check(sq, 1e-9);
  const double worst = std::max({a.cmi, b.cmi, c.cmi_given_e, c.cmi_given_f});
  r.pass = a.holds && b.holds && c.holds && h.equal;
  r.detail = fmt_residual("max CMI", worst) + ", " + fmt_residual("|I(S;E) - I(S;F)|", std::abs(h.i_se - h.i_sf));
  return r;
}

SuiteResult suite_dual_path(std::mt19937_64& rng, const OptimizerConfig& base) {
  SuiteResult r{"dual_path", true, {}};
  double worst_rci = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 9);
    const double g = 4.0 * unit_uniform(rng);
    const ProbabilityDistribution p(random_simplex(d, rng));
    worst_rci = std::max(worst_rci, std::abs(reverse_coherent_information(p, g) - capacity_objective(p, g)));
  }
  OptimizerConfig cfg = base;
  cfg.multistarts = 2;
  double worst_bs = 0.0;
  for (const double g : {0.5, 3.0}) {
    const double a = beamsplitter_bound_via_pipeline(g, 6, cfg).q_bits;
    const double b = optimize_capacity(0.5 * g, 6, cfg).q_bits;
    worst_bs = std::max(worst_bs, std::abs(a - b));
  }
  r.pass = worst_rci <= 1e-12 && worst_bs <= 1e-9;
  r.detail = fmt_residual("max |RCI - Q|", worst_rci) + ", " + fmt_residual("max |beamsplitter - Q(g/2)|", worst_bs);
  return r;
}

SuiteResult suite_concavity(std::mt19937_64& rng) {
  SuiteResult r{"concavity", true, {}};
  double worst = 0.0;  // largest violation of obj(mix) >= mix of obj
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 2 + static_cast<std::size_t>(rng() % 9);
    const double g = 4.0 * unit_uniform(rng);
    const std::vector<double> p = random_simplex(d, rng);
    const std::vector<double> q = random_simplex(d, rng);
    std::vector<double> m(d);
    for (std::size_t n = 0; n < d; ++n) m[n] = 0.5 * (p[n] + q[n]);
    const double lhs = capacity_objective(ProbabilityDistribution(m), g);
    const double rhs = 0.5 * (capacity_objective(ProbabilityDistribution(p), g) +
                              capacity_objective(ProbabilityDistribution(q), g));
    worst = std::max(worst, rhs - lhs);
  }
  r.pass = worst <= 1e-9;
  r.detail = fmt_residual("max violation", worst);
  return r;
}

SuiteResult suite_dephasing_precondition(const RunConfig& cfg, std::mt19937_64& rng) {
  SuiteResult r{"dephasing_precondition", true, {}};
  const std::vector<double> grid = cfg.gamma.grid();
  double worst_trace = 0.0;
  for (const double g : grid) {
    try {
      const Eigen::MatrixXcd rho = random_density_entries(cfg.dim, rng);
      const DensityMatrix out = dephasing_apply(DensityMatrix(rho), g);
      worst_trace = std::max(worst_trace, std::abs(out.entries().trace().real() - 1.0));
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = "gamma = " + format_number(g) + ": " + e.what();
      return r;
    }
  }
  r.pass = worst_trace <= 1e-12;
  r.detail = std::to_string(grid.size()) + " gamma values, " + fmt_residual("max trace error", worst_trace);
  return r;
}

std::vector<std::size_t> saturation_dims(std::size_t dim) {
  std::vector<std::size_t> ds;
  for (std::size_t d = 2; d <= dim; ++d) ds.push_back(d);
  return ds;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "bounds") return Command::Bounds;
  if (name == "capacity") return Command::Capacity;
  if (name == "qubit-squash") return Command::QubitSquash;
  if (name == "saturation") return Command::Saturation;
  if (name == "verify") return Command::Verify;
  return std::nullopt;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::Bounds: return "bounds";
    case Command::Capacity: return "capacity";
    case Command::QubitSquash: return "qubit-squash";
    case Command::Saturation: return "saturation";
    case Command::Verify: return "verify";
  }
  return "?";
}

GammaSpec GammaSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  GammaSpec g;
  const auto c1 = t.find(':');
  if (c1 == std::string::npos) {
    g.min = g.max = parse_double(t, "gamma");
    g.step = 1.0;
    return g;
  }
  const auto c2 = t.find(':', c1 + 1);
  if (c2 == std::string::npos || t.find(':', c2 + 1) != std::string::npos)
    throw std::invalid_argument("gamma must be MIN:MAX:STEP or a single value, got '" + text + "'");
  g.min = parse_double(t.substr(0, c1), "gamma min");
  g.max = parse_double(t.substr(c1 + 1, c2 - c1 - 1), "gamma max");
  g.step = parse_double(t.substr(c2 + 1), "gamma step");
  if (!(g.step > 0.0)) throw std::invalid_argument("gamma step must be > 0");
  if (!(g.min <= g.max)) throw std::invalid_argument("gamma min must not exceed max");
  return g;
}

std::vector<double> GammaSpec::grid() const {
  if (!(step > 0.0) || !(min <= max)) throw std::invalid_argument("invalid gamma range");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = min + static_cast<double>(i) * step;
  return out;
}

void RunConfig::validate() const {
  if (!(gamma.step > 0.0)) throw std::invalid_argument("gamma step must be > 0");
  if (!(gamma.min <= gamma.max)) throw std::invalid_argument("gamma min must not exceed max");
  if (command != Command::Verify && gamma.min < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (dim < 2) throw std::invalid_argument("dim must be >= 2");
  if (energy_cap && !(*energy_cap >= 0.0)) throw std::invalid_argument("energy cap must be >= 0 or inf");
  optimizer.validate();
}

std::optional<double> parse_energy(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "inf" || t == "infinity") return std::nullopt;
  const double v = parse_double(t, "energy");
  if (std::isinf(v) && v > 0.0) return std::nullopt;
  if (!(v >= 0.0)) throw std::invalid_argument("energy cap must be >= 0 or inf");
  return v;
}

std::map<std::string, std::string> parse_config_text(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw std::invalid_argument("config line " + std::to_string(no) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "gamma")
      cfg.gamma = GammaSpec::parse(value);
    else if (key == "dim")
      cfg.dim = parse_int<std::size_t>(value, "dim");
    else if (key == "energy")
      cfg.energy_cap = parse_energy(value);
    else if (key == "out")
      cfg.out_path = value;
    else if (key == "seed")
      cfg.optimizer.seed = parse_int<std::uint64_t>(value, "seed");
    else if (key == "max_iters")
      cfg.optimizer.max_iters = parse_int<int>(value, "max_iters");
    else if (key == "objective_tol")
      cfg.optimizer.objective_tol = parse_double(value, "objective_tol");
    else if (key == "multistarts")
      cfg.optimizer.multistarts = parse_int<int>(value, "multistarts");
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  cfg.optimizer.energy_cap = cfg.energy_cap;
}

unsigned default_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DEPHCAP_THREADS")) {
    try {
      const auto cap = parse_int<unsigned>(env, "DEPHCAP_THREADS");
      if (cap > 0) n = std::min(n, cap);
    } catch (const std::invalid_argument&) {
      // malformed value: keep the hardware default
    }
  }
  return n;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

RunOutput run_bounds(const RunConfig& cfg) {
  OptimizerConfig oc = cfg.optimizer;
  oc.energy_cap = cfg.energy_cap;
  const std::vector<double> grid = cfg.gamma.grid();
  const std::vector<BoundsRow> rows = gap_sweep(grid, cfg.dim, oc, cfg.threads);

  RunOutput out;
  std::ostringstream csv;
  csv << "gamma,dim,energy_cap,lower_bits,upper_bits,gap_bits,converged\n";
  std::size_t bad = 0;
  double peak = -std::numeric_limits<double>::infinity();
  double peak_gamma = 0.0;
  std::ostringstream errors;
  for (const BoundsRow& r : rows) {
    const bool ok = r.error.empty();
    csv << format_number(r.gamma) << ',' << r.dim << ',' << energy_text(r.energy_cap) << ','
        << format_number(ok ? r.lower_bits : NAN) << ',' << format_number(ok ? r.upper_bits : NAN) << ','
        << format_number(ok ? r.gap_bits : NAN) << ',' << flag(ok && r.converged) << '\n';
    if (!ok || !r.converged) ++bad;
    if (!ok) errors << "  gamma = " << format_number(r.gamma) << ": " << r.error << '\n';
    if (ok && r.gap_bits > peak) {
      peak = r.gap_bits;
      peak_gamma = r.gamma;
    }
  }
  out.csv = csv.str();
  std::ostringstream sum;
  sum << "bounds: " << rows.size() << " rows, d = " << cfg.dim << ", energy " << energy_text(cfg.energy_cap)
      << "; peak gap " << format_number(peak) << " bits at gamma = " << format_number(peak_gamma) << "; " << bad
      << " row(s) not converged\n"
      << errors.str();
  out.summary = sum.str();
  out.exit_code = bad == 0 ? 0 : 2;
  return out;
}

RunOutput run_capacity(const RunConfig& cfg) {
  OptimizerConfig oc = cfg.optimizer;
  oc.energy_cap = cfg.energy_cap;
  const std::vector<double> grid = cfg.gamma.grid();
  std::vector<std::optional<CapacityResult>> res(grid.size());
  std::vector<std::string> errs(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    try {
      res[i] = optimize_capacity(grid[i], cfg.dim, oc);
    } catch (const std::exception& e) {
      errs[i] = e.what();
    }
  });
  RunOutput out;
  std::ostringstream csv;
  csv << "gamma,dim,energy_cap,capacity_bits,fw_gap_bits,iterations,converged\n";
  std::size_t bad = 0;
  std::ostringstream errors;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << format_number(grid[i]) << ',' << cfg.dim << ',' << energy_text(cfg.energy_cap) << ',';
    if (res[i]) {
      const auto& d = res[i]->diagnostics;
      csv << format_number(res[i]->q_bits) << ',' << format_number(d.fw_gap_bits) << ',' << d.iterations << ','
          << flag(d.converged) << '\n';
      if (!d.converged) ++bad;
    } else {
      csv << "nan,nan,0,false\n";
      ++bad;
      errors << "  gamma = " << format_number(grid[i]) << ": " << errs[i] << '\n';
    }
  }
  out.csv = csv.str();
  out.summary = "capacity: " + std::to_string(grid.size()) + " rows, d = " + std::to_string(cfg.dim) + "; " +
                std::to_string(bad) + " row(s) not converged\n" + errors.str();
  out.exit_code = bad == 0 ? 0 : 2;
  return out;
}

RunOutput run_qubit_squash(const RunConfig& cfg) {
  OptimizerConfig oc = cfg.optimizer;
  oc.energy_cap = cfg.energy_cap;
  const std::vector<double> grid = cfg.gamma.grid();
  struct Row {
    QubitSquashResult qs;
    double bs = 0.0;
    double lo = 0.0;
    bool converged = false;
    std::string error;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    try {
      rows[i].qs = qubit_squash_bound(grid[i], oc);
      const CapacityResult bs = beamsplitter_bound_via_pipeline(grid[i], 2, oc);
      const CapacityResult lo = optimize_capacity(grid[i], 2, oc);
      rows[i].bs = bs.q_bits;
      rows[i].lo = lo.q_bits;
      rows[i].converged = bs.diagnostics.converged && lo.diagnostics.converged;
    } catch (const std::exception& e) {
      rows[i].error = e.what();
    }
  });
  RunOutput out;
  std::ostringstream csv;
  csv << "gamma,qubit_bound_bits,beamsplitter_bound_bits,lower_bits,best_family,best_theta,best_phi\n";
  std::size_t bad = 0;
  double max_diff = 0.0;
  std::ostringstream errors;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Row& r = rows[i];
    if (!r.error.empty()) {
      csv << format_number(grid[i]) << ",nan,nan,nan,,nan,nan\n";
      ++bad;
      errors << "  gamma = " << format_number(grid[i]) << ": " << r.error << '\n';
      continue;
    }
    if (!r.converged) ++bad;
    max_diff = std::max(max_diff, std::abs(r.qs.bound_bits - r.bs));
    csv << format_number(grid[i]) << ',' << format_number(r.qs.bound_bits) << ',' << format_number(r.bs) << ','
        << format_number(r.lo) << ',' << (r.qs.params.family == QubitFamily::A ? 'A' : 'B') << ','
        << format_number(r.qs.params.theta) << ',' << format_number(r.qs.params.phi) << '\n';
  }
  out.csv = csv.str();
  out.summary = "qubit-squash: " + std::to_string(grid.size()) + " rows; max |qubit - beamsplitter| = " +
                format_number(max_diff) + " bits; " + std::to_string(bad) + " row(s) failed\n" + errors.str();
  out.exit_code = bad == 0 ? 0 : 2;
  return out;
}

RunOutput run_saturation(const RunConfig& cfg) {
  OptimizerConfig oc = cfg.optimizer;
  oc.energy_cap = cfg.energy_cap;
  const std::vector<std::size_t> dims = saturation_dims(cfg.dim);
  RunOutput out;
  std::ostringstream csv;
  csv << "gamma,dim,energy_cap,lower_bits,upper_bits,lower_delta_bits,upper_delta_bits\n";
  std::ostringstream sum;
  std::size_t bad = 0;
  for (const double g : cfg.gamma.grid()) {
    const std::vector<SaturationRow> rows = dimension_saturation(g, dims, oc, cfg.threads);
    for (const SaturationRow& r : rows) {
      csv << format_number(g) << ',' << r.bounds.dim << ',' << energy_text(cfg.energy_cap) << ','
          << format_number(r.bounds.lower_bits) << ',' << format_number(r.bounds.upper_bits) << ','
          << (r.lower_delta ? format_number(*r.lower_delta) : "") << ','
          << (r.upper_delta ? format_number(*r.upper_delta) : "") << '\n';
      if (!r.bounds.converged) ++bad;
    }
    const SaturationRow& last = rows.back();
    sum << "saturation: gamma = " << format_number(g) << ", d = 2.." << cfg.dim;
    if (last.upper_delta)
      sum << "; last step |upper delta| = " << format_number(*last.upper_delta)
          << ", |lower delta| = " << format_number(*last.lower_delta);
    sum << '\n';
  }
  if (bad > 0) sum << bad << " row(s) not converged\n";
  out.csv = csv.str();
  out.summary = sum.str();
  out.exit_code = bad == 0 ? 0 : 2;
  return out;
}

RunOutput run_verify(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.optimizer.seed);
  std::vector<std::function<SuiteResult()>> suites{
      [&] { return suite_kraus(rng); },
      [&] { return suite_ssa(rng); },
      [&] { return suite_markov(rng); },
      [&] { return suite_dual_path(rng, cfg.optimizer); },
      [&] { return suite_concavity(rng); },
      [&] { return suite_dephasing_precondition(cfg, rng); },
  };
  RunOutput out;
  std::ostringstream rep;
  std::size_t failed = 0;
  for (auto& run : suites) {
    SuiteResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {"(suite)", false, e.what()};
    }
    if (!r.pass) ++failed;
    rep << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
  }
  out.csv = rep.str();
  out.summary = "verify: " + std::to_string(suites.size() - failed) + "/" + std::to_string(suites.size()) +
                " suites passed\n";
  out.exit_code = failed == 0 ? 0 : 2;
  return out;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunOutput res;
  try {
    cfg.validate();
    switch (cfg.command) {
      case Command::Bounds: res = run_bounds(cfg); break;
      case Command::Capacity: res = run_capacity(cfg); break;
      case Command::QubitSquash: res = run_qubit_squash(cfg); break;
      case Command::Saturation: res = run_saturation(cfg); break;
      case Command::Verify: res = run_verify(cfg); break;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (cfg.out_path.empty()) {
    out << res.csv;
    err << res.summary;
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (f) f << res.csv;
    if (!f) {
      err << "error: cannot write '" << cfg.out_path << "'\n";
      return 1;
    }
    out << res.summary;
  }
  return res.exit_code;
}

}  // namespace dephcap::cli

#include "cli_commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "catstress/fock_oracle.hpp"
#include "catstress/serialization.hpp"

namespace catstress::cli {

using nlohmann::json;

namespace {

// Evaluates fn(0..n-1) on up to `threads` workers; results keep index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, int threads, Fn fn) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::clamp(threads, 1, 64));
  if (count == 1 || n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(count, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::filesystem::path output_dir(const RunConfig& config, const GlobalOptions& options) {
  auto dir = options.out.value_or(config.output_directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& text, std::ostream& log) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << text;
  if (!os) throw ConfigError("failed writing " + path.string());
  log << "wrote " << path.string() << '\n';
}

void write_report(const std::filesystem::path& dir, const std::string& name, const RunConfig& config,
                  json results, std::ostream& log) {
  const json report = {{"version", kReportVersion},
                       {"config_hash", config_hash(config.source)},
                       {"results", std::move(results)}};
  write_file(dir / name, report.dump(2) + "\n", log);
}

std::string point_header(const std::string& suffix, int dimension) {
  std::string h = "t" + suffix;
  for (int j = 1; j <= dimension; ++j) h += ",x" + std::to_string(j) + suffix;
  return h;
}

std::string point_cells(const SpacetimePoint& p) {
  std::string s = format_real(p.t);
  for (double x : p.x) s += "," + format_real(x);
  return s;
}

std::string theta_cell(const std::optional<double>& theta) { return theta ? format_real(*theta) : ""; }

std::string case_cells(const StateCase& c) {
  return std::to_string(c.index) + "," + format_real(c.alpha_squared) + "," + theta_cell(c.theta) + "," +
         format_real(c.epsilon);
}

json case_json(const StateCase& c) {
  json j = {{"case", c.index}, {"alpha_squared", c.alpha_squared}, {"epsilon", c.epsilon},
            {"state", state_to_json(c.state)}};
  if (c.theta) j["theta"] = *c.theta;
  return j;
}

std::vector<MomentSlot> all_slots(const RunConfig& config) {
  std::vector<MomentSlot> slots;
  for (const auto& p : config.points) {
    for (const auto& c : config.components) slots.push_back({p, c});
  }
  return slots;
}

// ---------------------------------------------------------------------------
// validate-modes

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass() const { return value <= tolerance; }
};

}  // namespace

int cmd_validate_modes(const RunConfig& config, const GlobalOptions& options, std::ostream& log) {
  const auto dir = output_dir(config, options);
  BasisPtr basis = config.basis.build();
  if (config.validate.corrupt_frequency != 0.0) {
    basis = std::make_shared<const ModeBasis>(basis->with_frequency_offset(config.validate.corrupt_frequency));
  }
  const double tol = config.validate.tolerance;
  const std::size_t n = basis->size();

  double ortho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      const auto pi = mode_solution(basis, i, Branch::positive), pj = mode_solution(basis, j, Branch::positive);
      const auto mi = mode_solution(basis, i, Branch::negative), mj = mode_solution(basis, j, Branch::negative);
      ortho = std::max({ortho, std::abs(kg_inner_product(pi, pj, *basis, 0.0) - delta),
                        std::abs(kg_inner_product(mi, mj, *basis, 0.0) + delta),
                        std::abs(kg_inner_product(pi, mj, *basis, 0.0))});
    }
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : config.points) {
      for (Branch b : {Branch::positive, Branch::negative}) {
        residual = std::max(residual, std::abs(kg_residual(*basis, i, p, b)));
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ModeExpansion f, g;
  for (std::size_t i = 0; i < n; ++i) {
    f.positive.emplace_back(u(rng), u(rng));
    f.negative.emplace_back(u(rng), u(rng));
    g.positive.emplace_back(u(rng), u(rng));
    g.negative.emplace_back(u(rng), u(rng));
  }
  const auto fs = f.as_solution(basis), gs = g.as_solution(basis);
  const Complex reference = kg_inner_product(fs, gs, *basis, 0.0);
  double slice = 0.0;
  for (double t : {0.5, 1.7, -3.2}) {
    slice = std::max(slice, std::abs(kg_inner_product(fs, gs, *basis, t) - reference) /
                                std::max(1.0, std::abs(reference)));
  }

  const std::vector<Check> checks{{"orthonormality", ortho, tol},
                                  {"on_shell_residual", residual, tol},
                                  {"slice_independence", slice, tol}};
  std::ostringstream csv;
  csv << "check,value,tolerance,pass\n";
  json results = json::array();
  bool all = true;
  for (const auto& c : checks) {
    csv << c.name << ',' << format_real(c.value) << ',' << format_real(c.tolerance) << ','
        << (c.pass() ? "pass" : "fail") << '\n';
    results.push_back({{"check", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
    all = all && c.pass();
    log << (c.pass() ? "[pass] " : "[FAIL] ") << c.name << " = " << format_real(c.value) << '\n';
  }
  write_file(dir / "validate_modes.csv", csv.str(), log);
  write_report(dir, "validate_modes.json", config,
               json::array({{{"modes", n}, {"basis", basis_to_json(*basis)}, {"checks", results}}}), log);
  return all ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------------
// delta

namespace {

struct DeltaTable {
  std::string csv_rows;
  json summary;
};

DeltaTable delta_rows(const RunConfig& config, const StateCase& c) {
  const auto slots = all_slots(config);
  std::ostringstream rows;
  double max_delta = 0.0;
  std::size_t indeterminate = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    for (std::size_t j = i; j < slots.size(); ++j) {
      const auto r = kuo_ford_delta(c.state, slots[i], slots[j], {config.symmetrized, config.placement});
      rows << case_cells(c) << ',' << point_cells(slots[i].point) << ',' << slots[i].component.mu << ','
           << slots[i].component.nu << ',' << point_cells(slots[j].point) << ',' << slots[j].component.mu
           << ',' << slots[j].component.nu << ',' << (r.delta ? format_real(*r.delta) : "indet") << ','
           << format_real(r.numerator.real()) << ',' << format_real(r.numerator.imag()) << ','
           << format_real(r.denominator.real()) << ',' << format_real(r.denominator.imag()) << ','
           << (r.coincident ? 1 : 0) << '\n';
      if (r.delta) {
        max_delta = std::max(max_delta, *r.delta);
      } else {
        ++indeterminate;
      }
    }
  }
  auto summary = case_json(c);
  summary["max_delta"] = max_delta;
  summary["indeterminate"] = indeterminate;
  return {rows.str(), summary};
}

std::string delta_header(int dimension) {
  return "case,alpha_squared,theta,epsilon," + point_header("_1", dimension) + ",mu_1,nu_1," +
         point_header("_2", dimension) + ",mu_2,nu_2,delta,numerator_re,numerator_im,denominator_re," +
         "denominator_im,coincident\n";
}

struct MomentTable {
  std::string csv_rows;
  json summary;
};

MomentTable moment_rows(const RunConfig& config, const StateCase& c) {
  std::ostringstream rows;
  json values = json::array();
  const bool cat = std::holds_alternative<CatState>(c.state);
  for (int n : config.moment_orders) {
    for (const auto& comp : config.components) {
      std::vector<MomentSlot> slots;
      for (int k = 0; k < n; ++k) {
        slots.push_back({config.points[static_cast<std::size_t>(k) % config.points.size()], comp});
      }
      const auto r = central_moment(c.state, slots, {kDefaultMomentCap, config.placement});
      const double magnitude = std::abs(r.central);
      const std::string ratio = cat ? format_real(magnitude / c.epsilon) : "";
      rows << case_cells(c) << ',' << n << ',' << comp.mu << ',' << comp.nu << ','
           << format_real(r.central.real()) << ',' << format_real(r.central.imag()) << ','
           << format_real(magnitude) << ',' << ratio << '\n';
      json v = {{"n", n}, {"mu", comp.mu}, {"nu", comp.nu}, {"central_re", r.central.real()},
                {"central_im", r.central.imag()}};
      if (cat) v["ratio_to_epsilon"] = magnitude / c.epsilon;
      values.push_back(std::move(v));
    }
  }
  auto summary = case_json(c);
  summary["moments"] = std::move(values);
  return {rows.str(), summary};
}

const char* kMomentHeader = "case,alpha_squared,theta,epsilon,n,mu,nu,central_re,central_im,abs_central,ratio_to_epsilon\n";

}  // namespace

int cmd_delta(const RunConfig& config, const GlobalOptions& options, std::ostream& log) {
  const auto dir = output_dir(config, options);
  const auto cases = expand_states(config, config.basis.build());
  const auto tables =
      parallel_map<DeltaTable>(cases.size(), options.threads, [&](std::size_t i) { return delta_rows(config, cases[i]); });
  std::string csv = delta_header(config.basis.dimension);
  json results = json::array();
  for (const auto& t : tables) {
    csv += t.csv_rows;
    results.push_back(t.summary);
  }
  write_file(dir / "delta.csv", csv, log);
  write_report(dir, "delta.json", config, results, log);
  return kExitOk;
}

int cmd_moments(const RunConfig& config, const GlobalOptions& options, std::ostream& log) {
  const auto dir = output_dir(config, options);
  const auto cases = expand_states(config, config.basis.build());
  const auto tables = parallel_map<MomentTable>(cases.size(), options.threads,
                                                [&](std::size_t i) { return moment_rows(config, cases[i]); });
  std::string csv = kMomentHeader;
  json results = json::array();
  for (const auto& t : tables) {
    csv += t.csv_rows;
    results.push_back(t.summary);
  }
  write_file(dir / "moments.csv", csv, log);
  write_report(dir, "moments.json", config, results, log);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-compare

namespace {

struct Comparison {
  std::string check;
  std::string label;
  Complex closed;
  Complex oracle;
  double bound;
  double tolerance;

  double deviation() const { return std::abs(oracle - closed) / std::max(1.0, std::abs(closed)); }
  bool pass() const { return deviation() <= tolerance; }
};

OperatorPolynomial random_polynomial(std::mt19937_64& rng, int max_degree, int labels, int dimension) {
  std::uniform_int_distribution<int> degree(0, max_degree), label(0, labels - 1), kind(0, 2),
      direction(0, dimension), terms(1, 3);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  OperatorPolynomial p(std::max(max_degree, 1));
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    std::vector<FieldFactor> factors;
    const int k = t == 0 ? max_degree : degree(rng);
    for (int f = 0; f < k; ++f) {
      DerivativeIndex d;
      const int kd = kind(rng);
      if (kd == 1) d = DerivativeIndex::first(direction(rng));
      if (kd == 2) d = DerivativeIndex::second(direction(rng), direction(rng));
      factors.push_back({PointLabel{label(rng)}, d});
    }
    p.add_term(Complex(coeff(rng), coeff(rng)), std::move(factors));
  }
  return p;
}

std::vector<Comparison> oracle_checks(const RunConfig& config, const GlobalOptions& options, const BasisPtr& basis,
                                      const StateCase& c) {
  const int cutoff = config.oracle.cutoff;
  const TruncatedFock space(static_cast<int>(basis->size()), cutoff);
  const auto& alpha = state_amplitude(c.state);
  const double base_tol = config.oracle.tolerance;
  auto tolerance_for = [&](int degree) {
    const double bound = 2.0 * truncation_bound(alpha, std::max(0, cutoff - degree));
    return std::pair{bound, std::max(base_tol, 10.0 * bound)};
  };

  const OracleState st = std::holds_alternative<CatState>(c.state)
                             ? oracle_cat(std::get<CatState>(c.state), space)
                             : oracle_coherent(alpha, space);
  const OracleState plus = oracle_coherent(alpha, space);
  const OracleState minus = oracle_coherent(-alpha, space);
  std::vector<Comparison> out;

  // Stress tensor expectations in the configured state.
  for (std::size_t k = 0; k < config.points.size(); ++k) {
    for (const auto& comp : config.components) {
      const PointLabel x{0};
      const LabelAssignment as{{x, config.points[k]}};
      const auto poly = build_stress_tensor({basis, comp, config.placement}, x);
      const auto [bound, tol] = tolerance_for(2);
      out.push_back({"stress_expectation",
                     "p" + std::to_string(k) + " T" + std::to_string(comp.mu) + std::to_string(comp.nu),
                     stress_expectation(c.state, comp, config.points[k], config.placement),
                     oracle_polynomial_expectation(poly, st, space, *basis, as).value, bound, tol});
    }
  }

  // Random polynomial matrix elements <a|:P:|b> with a, b in {alpha, -alpha}.
  std::mt19937_64 rng(options.seed + 7919 * c.index);
  const int labels = std::min<int>(2, static_cast<int>(config.points.size()));
  LabelAssignment as;
  for (int l = 0; l < labels; ++l) as.emplace(PointLabel{l}, config.points[static_cast<std::size_t>(l)]);
  for (int k = 0; k < config.oracle.polynomials; ++k) {
    const auto p = random_polynomial(rng, config.oracle.max_degree, labels, basis->dimension());
    const bool cross = k % 2 == 1;
    const auto& ket_amp = cross ? -alpha : alpha;
    const auto& ket_vec = cross ? minus.vector : plus.vector;
    const auto [bound, tol] = tolerance_for(p.degree());
    out.push_back({"polynomial_matrix_element", "P" + std::to_string(k) + (cross ? " <a|:P:|-a>" : " <a|:P:|a>"),
                   coherent_matrix_element(p, alpha, ket_amp, as),
                   normal_ordered_element(p, space, *basis, as, plus.vector, ket_vec), bound, tol});
  }

  // Second central moment of the first component at the first two points.
  {
    const auto comp = config.components.front();
    const MomentSlot s0{config.points.front(), comp};
    const MomentSlot s1{config.points[std::min<std::size_t>(1, config.points.size() - 1)], comp};
    const MomentSlot both[2] = {s0, s1}, swapped[2] = {s1, s0}, only0[1] = {s0}, only1[1] = {s1};
    auto raw = [&](std::span<const MomentSlot> slots) {
      LabelAssignment a;
      for (std::size_t j = 0; j < slots.size(); ++j) a.emplace(PointLabel{static_cast<int>(j)}, slots[j].point);
      return oracle_polynomial_expectation(moment_polynomial(basis, slots, config.placement), st, space, *basis, a)
          .value;
    };
    const Complex oracle_mu2 = 0.5 * (raw(both) + raw(swapped)) - raw(only0) * raw(only1);
    const auto [bound, tol] = tolerance_for(4);
    out.push_back({"central_moment_2", "T" + std::to_string(comp.mu) + std::to_string(comp.nu),
                   central_moment(c.state, both, {kDefaultMomentCap, config.placement}).central, oracle_mu2,
                   bound, tol});
  }

  // [a_i, D(alpha)] = alpha_i D(alpha) on the low-occupation block. D(alpha) is a
  // tensor product over modes, so each mode is checked in its own space.
  const TruncatedFock single_space(1, std::max(cutoff, 40));
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto single = std::make_shared<const ModeBasis>(basis->geometry(), basis->mass(), basis->coupling(),
                                                          std::vector<std::vector<int>>{basis->mode(i).index});
    const CoherentAmplitude ai(single, {alpha[i]});
    out.push_back({"displacement_commutator", "mode " + std::to_string(i), 0.0,
                   commutator_defect(ai, single_space), truncation_bound(ai, single_space.cutoff()), 1e-8});
  }
  return out;
}

}  // namespace

int cmd_oracle_compare(const RunConfig& config, const GlobalOptions& options, std::ostream& log) {
  if (!config.oracle.enabled) throw ConfigError("oracle-compare needs oracle.enabled = true");
  const auto dir = output_dir(config, options);
  const auto basis = config.basis.build();
  const auto cases = expand_states(config, basis);
  const auto per_case = parallel_map<std::vector<Comparison>>(
      cases.size(), options.threads, [&](std::size_t i) { return oracle_checks(config, options, basis, cases[i]); });

  std::ostringstream csv;
  csv << "case,check,label,closed_re,closed_im,oracle_re,oracle_im,deviation,truncation_bound,tolerance,pass\n";
  json results = json::array();
  bool all = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    double case_worst = 0.0;
    bool case_pass = true;
    for (const auto& r : per_case[i]) {
      csv << i << ',' << r.check << ',' << r.label << ',' << format_real(r.closed.real()) << ','
          << format_real(r.closed.imag()) << ',' << format_real(r.oracle.real()) << ','
          << format_real(r.oracle.imag()) << ',' << format_real(r.deviation()) << ',' << format_real(r.bound)
          << ',' << format_real(r.tolerance) << ',' << (r.pass() ? "pass" : "fail") << '\n';
      case_worst = std::max(case_worst, r.deviation());
      case_pass = case_pass && r.pass();
    }
    auto summary = case_json(cases[i]);
    summary["cutoff"] = config.oracle.cutoff;
    summary["comparisons"] = per_case[i].size();
    summary["max_deviation"] = case_worst;
    summary["pass"] = case_pass;
    results.push_back(std::move(summary));
    all = all && case_pass;
    worst = std::max(worst, case_worst);
  }
  write_file(dir / "oracle_compare.csv", csv.str(), log);
  write_report(dir, "oracle_compare.json", config, results, log);
  log << (all ? "[pass]" : "[FAIL]") << " max deviation " << format_real(worst) << '\n';
  return all ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const RunConfig& config, const GlobalOptions& options, std::ostream& log) {
  const auto dir = output_dir(config, options);
  const auto cases = expand_states(config, config.basis.build());
  struct Row {
    DeltaTable delta;
    MomentTable moments;
    Complex mu2;
  };
  const auto rows = parallel_map<Row>(cases.size(), options.threads, [&](std::size_t i) {
    const auto& c = cases[i];
    const MomentSlot s0{config.points.front(), config.components.front()};
    const MomentSlot s1{config.points[std::min<std::size_t>(1, config.points.size() - 1)], config.components.front()};
    const MomentSlot pair[2] = {s0, s1};
    return Row{delta_rows(config, c), moment_rows(config, c),
               central_moment(c.state, pair, {kDefaultMomentCap, config.placement}).central};
  });

  std::string delta_csv = delta_header(config.basis.dimension), moment_csv = kMomentHeader;
  std::ostringstream summary;
  summary << "case,alpha_squared,theta,epsilon,max_delta,abs_mu2,mu2_over_epsilon\n";
  json results = json::array();
  std::vector<double> log_eps, log_mu2;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto& r = rows[i];
    delta_csv += r.delta.csv_rows;
    moment_csv += r.moments.csv_rows;
    const double mu2 = std::abs(r.mu2);
    summary << case_cells(c) << ',' << format_real(r.delta.summary.at("max_delta").get<double>()) << ','
            << format_real(mu2) << ',' << (c.epsilon > 0.0 ? format_real(mu2 / c.epsilon) : "") << '\n';
    auto j = r.delta.summary;
    j["abs_mu2"] = mu2;
    j["moments"] = r.moments.summary.at("moments");
    results.push_back(std::move(j));
    if (c.epsilon > 0.0 && mu2 > 0.0) {
      log_eps.push_back(std::log(c.epsilon));
      log_mu2.push_back(std::log(mu2));
    }
  }
  write_file(dir / "delta.csv", delta_csv, log);
  write_file(dir / "moments.csv", moment_csv, log);
  write_file(dir / "sweep.csv", summary.str(), log);

  json fit = nullptr;
  if (log_eps.size() >= 2) {
    const double n = static_cast<double>(log_eps.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < log_eps.size(); ++k) {
      sx += log_eps[k];
      sy += log_mu2[k];
      sxx += log_eps[k] * log_eps[k];
      sxy += log_eps[k] * log_mu2[k];
    }
    const double denom = n * sxx - sx * sx;
    if (denom > 0.0) {
      fit = {{"log_log_slope_mu2_vs_epsilon", (n * sxy - sx * sy) / denom}, {"points", log_eps.size()}};
      log << "log-log slope of |mu_2| vs epsilon: " << format_real(fit.at("log_log_slope_mu2_vs_epsilon").get<double>())
          << '\n';
    }
  }
  write_report(dir, "sweep.json", config, json::array({{{"cases", results}, {"fit", fit}}}), log);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normal-ordered stress tensor statistics for coherent and cat states"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions options;
  std::string config_path, out_path;
  app.add_option("--config", config_path, "JSON run configuration (defaults apply when omitted)");
  app.add_option("--out", out_path, "Output directory (overrides output.directory)");
  app.add_option("--threads", options.threads, "Worker threads for sweeps")->check(CLI::Range(1, 64));
  app.add_option("--seed", options.seed, "Seed for randomized suites");
  int cutoff = 0;
  double corrupt = 0.0;
  auto* cutoff_opt = app.add_option("--cutoff", cutoff, "Override oracle.cutoff")->check(CLI::PositiveNumber);
  auto* corrupt_opt = app.add_option("--corrupt-frequency", corrupt, "Override validate.corrupt_frequency");

  using Command = int (*)(const RunConfig&, const GlobalOptions&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"validate-modes", "Orthonormality, residual and slice-independence checks", cmd_validate_modes},
      {"delta", "Kuo-Ford estimator table", cmd_delta},
      {"moments", "Central moment table", cmd_moments},
      {"oracle-compare", "Closed forms against the truncated Fock oracle", cmd_oracle_compare},
      {"sweep", "Estimator and moment tables over the configured sweep", cmd_sweep}};
  for (const auto& [name, help, fn] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!config_path.empty()) options.config = config_path;
    if (!out_path.empty()) options.out = out_path;
    RunConfig config = options.config ? load_config(*options.config) : parse_config(json::object());
    if (*cutoff_opt) {
      config.oracle.cutoff = cutoff;
      config.source["oracle"]["cutoff"] = cutoff;
    }
    if (*corrupt_opt) {
      config.validate.corrupt_frequency = corrupt;
      config.source["validate"]["corrupt_frequency"] = corrupt;
    }
    for (const auto& [name, help, fn] : commands) {
      if (app.got_subcommand(name)) return fn(config, options, out);
    }
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitTolerance;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace catstress::cli

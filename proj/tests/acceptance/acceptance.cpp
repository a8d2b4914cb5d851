// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion; exits
// non-zero if any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catstress/fock_oracle.hpp"
#include "catstress/moments.hpp"

namespace {

using namespace catstress;
namespace fs = std::filesystem;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome()> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

BasisPtr box_basis(int dimension, std::vector<std::vector<int>> indices, double mass = 1.0, double zeta = 0.0) {
  return std::make_shared<const ModeBasis>(BoxGeometry::make(dimension, kTwoPi), mass, zeta, std::move(indices));
}

std::vector<std::vector<int>> random_indices(std::mt19937_64& rng, int dimension, int count) {
  std::uniform_int_distribution<int> k(-2, 2);
  std::vector<std::vector<int>> out;
  while (static_cast<int>(out.size()) < count) {
    std::vector<int> n(static_cast<std::size_t>(dimension));
    for (auto& v : n) v = k(rng);
    // A lone zero mode has vanishing momentum density, making T_{0i} identically zero.
    if (std::all_of(n.begin(), n.end(), [](int v) { return v == 0; })) continue;
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

CoherentAmplitude random_amplitude(std::mt19937_64& rng, const BasisPtr& basis, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Complex> v(basis->size());
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& c : v) {
      c = {u(rng), u(rng)};
      s += std::norm(c);
    }
  } while (std::sqrt(s) > radius || s == 0.0);
  return CoherentAmplitude(basis, v);
}

SpacetimePoint random_point(std::mt19937_64& rng, const BasisPtr& basis) {
  std::uniform_real_distribution<double> t(-1.0, 1.0), x(0.0, basis->geometry().length);
  SpacetimePoint p{t(rng), {}};
  for (int j = 0; j < basis->dimension(); ++j) p.x.push_back(x(rng));
  return p;
}

Component random_component(std::mt19937_64& rng, int dimension) {
  std::uniform_int_distribution<int> c(0, dimension);
  return {c(rng), c(rng)};
}

// ---------------------------------------------------------------------------

Outcome coherent_kuo_ford() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> modes(1, 3), dim(1, 2);
  double worst = 0.0;
  int indeterminate = 0;
  for (int s = 0; s < 20; ++s) {
    const int d = dim(rng);
    const auto basis = box_basis(d, random_indices(rng, d, modes(rng)), 1.0, s % 3 == 0 ? 0.15 : 0.0);
    const State state = random_amplitude(rng, basis, 1.5);
    for (int k = 0; k < 5; ++k) {
      const MomentSlot a{random_point(rng, basis), random_component(rng, d)};
      const MomentSlot b{random_point(rng, basis), random_component(rng, d)};
      const auto r = kuo_ford_delta(state, a, b);
      if (r.indeterminate()) {
        ++indeterminate;
        continue;
      }
      worst = std::max(worst, *r.delta);
    }
  }
  return {worst <= 1e-12 && indeterminate == 0,
          "max delta " + sci(worst) + " over 100 pairs, " + std::to_string(indeterminate) + " indeterminate"};
}

Outcome phase_form_exactness() {
  std::mt19937_64 rng(202);
  const auto basis = box_basis(1, {{-1}, {1}});
  const auto direction = random_amplitude(rng, basis, 1.0);
  double worst = 0.0;
  int count = 0;
  for (double theta : {0.1, 0.4, std::numbers::pi / 4.0, 1.2}) {
    for (double a2 : {0.5, 1.0, 2.0}) {
      const auto alpha = direction.scaled(std::sqrt(a2 / direction.norm_squared()));
      const State state = phase_form_cat(theta, alpha);
      for (Component c : {Component{0, 0}, Component{0, 1}}) {
        std::vector<MomentSlot> slots;
        for (int j = 0; j < 4; ++j) slots.push_back({random_point(rng, basis), c});
        for (int n = 2; n <= 4; ++n) {
          const auto r = central_moment(state, std::span(slots).first(static_cast<std::size_t>(n)));
          double scale = 1.0;
          for (int j = 0; j < n; ++j) {
            const MomentSlot one[1] = {slots[static_cast<std::size_t>(j)]};
            scale *= std::abs(raw_moment(state, one));
          }
          worst = std::max(worst, std::abs(r.central) / scale);
          ++count;
        }
      }
    }
  }
  return {worst <= 1e-11, "max |mu_n| / prod |mu~_1| = " + sci(worst) + " over " + std::to_string(count) + " moments"};
}

// Equal-coefficient cat sweep shared by criteria 3 and 8.
struct SweepCase {
  double alpha_squared;
  CatState cat;
};

BasisPtr sweep_basis() { return box_basis(1, {{0}}); }

std::vector<SweepCase> sweep_cases(const BasisPtr& basis) {
  std::vector<SweepCase> out;
  for (int k = 0; k <= 8; ++k) {
    const double a2 = 1.0 + 0.5 * k;
    out.push_back({a2, cat_normalize(1.0, 1.0, CoherentAmplitude(basis, {Complex(std::sqrt(a2), 0.0)}))});
  }
  return out;
}

const SpacetimePoint kSweepPoints[2] = {{0.0, {0.0}}, {0.5, {0.0}}};

Outcome epsilon_scaling() {
  const auto basis = sweep_basis();
  std::vector<double> xs, ys;
  std::string table;
  for (const auto& c : sweep_cases(basis)) {
    const MomentSlot slots[2] = {{kSweepPoints[0], {0, 0}}, {kSweepPoints[1], {0, 0}}};
    const double mu2 = std::abs(central_moment(c.cat, slots).central);
    xs.push_back(std::log(c.cat.overlap()));
    ys.push_back(std::log(mu2));
    table += " " + sci(mu2 / c.cat.overlap());
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope - 1.0) <= 0.1, "log-log slope " + sci(slope) + "; |mu_2|/eps:" + table};
}

OperatorPolynomial random_polynomial(std::mt19937_64& rng, int labels, int dimension) {
  std::uniform_int_distribution<int> degree(1, 4), label(0, labels - 1), kind(0, 2), direction(0, dimension),
      terms(1, 3);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  OperatorPolynomial p(4);
  const int count = terms(rng);
  for (int t = 0; t < count; ++t) {
    std::vector<FieldFactor> factors;
    const int k = degree(rng);
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

Outcome oracle_equivalence() {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> labels(1, 2);
  double worst_dev[2] = {0.0, 0.0}, worst_ratio[2] = {0.0, 0.0};
  int failures[2] = {0, 0};
  for (int s = 0; s < 50; ++s) {
    const int two = s % 2;
    const auto basis = two ? box_basis(1, {{-1}, {1}}, 1.0, 0.1) : box_basis(1, {{1}}, 0.7);
    const int cutoff = two ? 12 : 40;
    const TruncatedFock space(static_cast<int>(basis->size()), cutoff);
    // Displacement needs a tail below 1e-8 at this cutoff.
    auto alpha = random_amplitude(rng, basis, 1.5);
    while (truncation_bound(alpha, cutoff) >= 1e-8) alpha = random_amplitude(rng, basis, 1.5);
    const auto beta = s % 4 < 2 ? alpha : -alpha;
    const int nl = labels(rng);
    const auto p = random_polynomial(rng, nl, basis->dimension());
    LabelAssignment as;
    for (int l = 0; l < nl; ++l) as.emplace(PointLabel{l}, random_point(rng, basis));

    const auto u = oracle_coherent(alpha, space);
    const auto v = oracle_coherent(beta, space);
    const Complex exact = coherent_matrix_element(p, alpha, beta, as);
    const Complex oracle = normal_ordered_element(p, space, *basis, as, u.vector, v.vector);
    const double dev = std::abs(oracle - exact) / std::abs(exact);
    const double tol = std::max(1e-7, 10.0 * std::max(u.truncation_bound, v.truncation_bound));
    worst_dev[two] = std::max(worst_dev[two], dev);
    worst_ratio[two] = std::max(worst_ratio[two], dev / tol);
    if (!(dev <= tol)) ++failures[two];
  }
  auto part = [&](int two, const char* label) {
    return std::string(label) + ": max relative deviation " + sci(worst_dev[two]) + ", max deviation/tolerance " +
           sci(worst_ratio[two]) + ", " + std::to_string(failures[two]) + "/25 over";
  };
  return {failures[0] + failures[1] == 0, part(0, "one mode N=40") + "; " + part(1, "two modes N=12")};
}

Outcome displacement_commutator() {
  std::mt19937_64 rng(505);
  const auto basis = box_basis(1, {{1}});
  const TruncatedFock space(1, 40);
  double worst = 0.0;
  std::vector<CoherentAmplitude> samples;
  for (int s = 0; s < 12; ++s) samples.push_back(random_amplitude(rng, basis, 1.5));
  samples.push_back(CoherentAmplitude(basis, {Complex(1.5, 0.0)}));
  samples.push_back(CoherentAmplitude(basis, {std::polar(1.5, 2.0)}));
  for (const auto& a : samples) worst = std::max(worst, commutator_defect(a, space));
  return {worst <= 1e-8, "max defect " + sci(worst) + " over " + std::to_string(samples.size()) + " amplitudes"};
}

Outcome mode_basis_suite() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double ortho = 0.0, slice = 0.0, residual = 0.0;
  int bases = 0;
  for (double mass : {1.0, 0.0, 2.5}) {
    for (int max_index = 0; max_index <= 4; ++max_index) {
      if (mass == 0.0 && max_index == 0) continue;
      std::vector<std::vector<int>> idx;
      for (int k = -max_index; k <= max_index; ++k) {
        if (mass == 0.0 && k == 0) continue;
        idx.push_back({k});
      }
      const auto basis = box_basis(1, idx, mass);
      ++bases;
      const std::size_t n = basis->size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto pi = mode_solution(basis, i, Branch::positive), mi = mode_solution(basis, i, Branch::negative);
        for (std::size_t j = 0; j < n; ++j) {
          const double delta = i == j ? 1.0 : 0.0;
          const auto pj = mode_solution(basis, j, Branch::positive), mj = mode_solution(basis, j, Branch::negative);
          ortho = std::max({ortho, std::abs(kg_inner_product(pi, pj, *basis, 0.0) - delta),
                            std::abs(kg_inner_product(mi, mj, *basis, 0.0) + delta),
                            std::abs(kg_inner_product(pi, mj, *basis, 0.0))});
        }
        for (int k = 0; k < 5; ++k) {
          const auto p = random_point(rng, basis);
          for (Branch b : {Branch::positive, Branch::negative}) {
            residual = std::max(residual, std::abs(kg_residual(*basis, i, p, b)));
          }
        }
      }
      ModeExpansion f, g;
      for (std::size_t i = 0; i < n; ++i) {
        f.positive.emplace_back(u(rng), u(rng));
        f.negative.emplace_back(u(rng), u(rng));
        g.positive.emplace_back(u(rng), u(rng));
        g.negative.emplace_back(u(rng), u(rng));
      }
      const auto fs = f.as_solution(basis), gs = g.as_solution(basis);
      const Complex reference = kg_inner_product(fs, gs, *basis, 0.0);
      for (double t : {0.5, 1.7, -3.2, 10.0}) {
        slice = std::max(slice, std::abs(kg_inner_product(fs, gs, *basis, t) - reference) /
                                    std::max(1.0, std::abs(reference)));
      }
    }
  }
  return {ortho <= 1e-12 && slice <= 1e-12 && residual <= 1e-12,
          std::to_string(bases) + " bases; orthonormality " + sci(ortho) + ", slice independence " + sci(slice) +
              ", on-shell residual " + sci(residual)};
}

Outcome dual_path() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> dim(1, 3), modes(1, 3);
  std::uniform_real_distribution<double> zeta(-0.3, 0.3), mass(0.5, 2.0);
  double worst = 0.0;
  int skipped = 0;
  for (int s = 0; s < 100; ++s) {
    const int d = dim(rng);
    const auto basis = box_basis(d, random_indices(rng, d, modes(rng)), mass(rng), zeta(rng));
    const auto alpha = random_amplitude(rng, basis, 1.5);
    const auto beta = random_amplitude(rng, basis, 1.5);
    const auto r = stress_bilinear(alpha, beta, random_component(rng, d), random_point(rng, basis),
                                   s % 2 ? IndexPlacement::upper : IndexPlacement::lower);
    if (r.engine_skipped) ++skipped;
    worst = std::max(worst, r.path_deviation);
  }
  return {worst <= 1e-12 && skipped == 0,
          "max path deviation " + sci(worst) + ", " + std::to_string(skipped) + " skipped"};
}

Outcome cat_source_term() {
  std::mt19937_64 rng(808);
  double phase_worst = 0.0;
  {
    const auto basis = box_basis(1, {{-1}, {1}}, 1.0, 0.2);
    for (double theta : {0.1, 0.4, std::numbers::pi / 4.0, 1.2}) {
      const auto alpha = random_amplitude(rng, basis, 1.5);
      const State cat = phase_form_cat(theta, alpha);
      for (int k = 0; k < 5; ++k) {
        const auto p = random_point(rng, basis);
        const auto c = random_component(rng, 1);
        const Complex coh = stress_expectation(alpha, c, p);
        phase_worst = std::max(phase_worst, std::abs(stress_expectation(cat, c, p) - coh) / std::max(1.0, std::abs(coh)));
      }
    }
  }
  const auto basis = sweep_basis();
  double generic_ratio = 0.0;
  for (const auto& sc : sweep_cases(basis)) {
    const double eps = sc.cat.overlap();
    for (const auto& p : kSweepPoints) {
      for (Component c : {Component{0, 0}, Component{0, 1}, Component{1, 1}}) {
        const Complex coh = stress_expectation(sc.cat.alpha(), c, p);
        const double dev = std::abs(stress_expectation(sc.cat, c, p) - coh);
        const double allowed = 5.0 * eps * std::abs(coh) + 1e-12;
        generic_ratio = std::max(generic_ratio, dev / allowed);
      }
    }
  }
  return {phase_worst <= 1e-12 && generic_ratio <= 1.0,
          "phase-form deviation " + sci(phase_worst) + ", generic deviation / (5 eps |T| + 1e-12) max " +
              sci(generic_ratio)};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path configs = CATSTRESS_CONFIG_DIR;
  const fs::path root = fs::temp_directory_path() / "catstress_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::pair<std::string, std::string>> jobs;  // config stem, subcommand
  for (const auto& entry : fs::directory_iterator(configs)) {
    if (entry.path().extension() != ".json") continue;
    const auto stem = entry.path().stem().string();
    for (const char* cmd : {"validate-modes", "delta", "moments", "sweep"}) jobs.emplace_back(stem, cmd);
    if (stem.rfind("oracle", 0) == 0) jobs.emplace_back(stem, "oracle-compare");
  }
  std::sort(jobs.begin(), jobs.end());
  int command_failures = 0;
  for (const char* run : {"a", "b"}) {
    for (const auto& [stem, cmd] : jobs) {
      const auto out = root / run / stem / cmd;
      const std::string line = std::string(CATSTRESS_CLI_PATH) + " " + cmd + " --config " +
                               (configs / (stem + ".json")).string() + " --out " + out.string() +
                               " --threads 2 --seed 7 > /dev/null 2>&1";
      const int status = std::system(line.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ++command_failures;
    }
  }
  int files = 0, mismatches = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const auto other = root / "b" / fs::relative(entry.path(), root / "a");
    if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) ++mismatches;
  }
  fs::remove_all(root);
  return {command_failures == 0 && mismatches == 0 && files > 0,
          std::to_string(jobs.size()) + " commands per run, " + std::to_string(files) + " files compared, " +
              std::to_string(mismatches) + " mismatched, " + std::to_string(command_failures) + " failed runs"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catstress acceptance suite"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion number(s) to run; all when omitted")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "coherent-state Kuo-Ford estimator vanishes", 5, coherent_kuo_ford},
      {2, "phase-form cat central moments vanish", 30, phase_form_exactness},
      {3, "equal cat |mu_2| scales linearly in epsilon", 60, epsilon_scaling},
      {4, "coherent matrix elements match truncated Fock oracle", 120, oracle_equivalence},
      {5, "displacement commutator on low occupations", 5, displacement_commutator},
      {6, "mode basis orthonormality, slice independence, on-shell", 5, mode_basis_suite},
      {7, "closed-form and polynomial-engine bilinears agree", 10, dual_path},
      {8, "cat source term equals coherent source term", 0, cat_source_term},
      {9, "CLI outputs are byte-identical across runs", 0, determinism},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.time_limit == 0 || seconds < c.time_limit;
    const bool pass = o.pass && in_time;
    all = all && pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name << " (" << o.detail
              << "; " << timing << (in_time ? "" : " over time limit") << ")\n";
  }
  return all ? 0 : 1;
}

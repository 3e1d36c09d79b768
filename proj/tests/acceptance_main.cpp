// Acceptance suite: every guarantee the library advertises, checked at its
// stated tolerance, one line per criterion. Heavy Monte-Carlo sections run
// with fixed seeds, so a pass is reproducible bit for bit.
//
// Exit codes: 0 all criteria pass (soft warnings allowed), 2 a criterion
// failed, 3 an internal invariant broke somewhere in a solver.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "disclab/cli.hpp"
#include "disclab/disclab.hpp"

using namespace disclab;

namespace {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  bool soft_warning = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> g_results;

template <typename Fn>
void criterion(int id, const std::string& name, Fn&& fn) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  fn(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  std::printf("[%s] criterion %2d  %-28s  %s  (%.1fs)\n",
              r.pass ? (r.soft_warning ? "WARN" : "PASS") : "FAIL", r.id,
              r.name.c_str(), r.detail.c_str(), r.seconds);
  std::fflush(stdout);
  g_results.push_back(std::move(r));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Shared between criteria 3, 4, 5: one walk corpus, three views of it.
WalkClaimsStats g_walk_stats;
bool g_walk_stats_ready = false;

const WalkClaimsStats& walk_stats() {
  if (!g_walk_stats_ready) {
    WalkClaimsConfig cfg;  // 200 single-attempt runs, n = m = 64, delta 0.05
    g_walk_stats = run_walk_claims(cfg);
    g_walk_stats_ready = true;
  }
  return g_walk_stats;
}

}  // namespace

// --------------------------------------------------------------------------

static void criterion_beck_fiala(CriterionResult& r) {
  BeckFialaSuiteConfig cfg;  // 200 instances, n in {20,50,100,200}, t in {2,3,5,10}
  const BeckFialaSuiteStats st = run_beck_fiala_suite(cfg);
  r.pass = st.violations == 0;
  r.detail = "violations=" + std::to_string(st.violations) + "/200, max disc/bound=" +
             fmt(st.max_disc_to_bound);
}

static void criterion_oracle_dominance(CriterionResult& r) {
  const int kInstances = 100;
  struct Row {
    bool ok = false;
    std::string why;
  };
  std::vector<Row> rows(kInstances);
  parallel_for(kInstances, [&](int k) {
    Rng rng = Rng(0xACCE97ull).substream(static_cast<std::uint64_t>(k));
    const int n = 6 + static_cast<int>(rng.uniform_below(9));  // 6..14
    const int m = 3 + static_cast<int>(rng.uniform_below(12));
    SetSystem sys;
    if (k % 3 == 0) {
      const int t = 2 + static_cast<int>(rng.uniform_below(2));
      sys = generate_bounded_degree(n, m, t, rng.next_u64());
    } else {
      const double p = 0.3 + 0.4 * rng.uniform();
      sys = generate_random(n, m, p, rng.next_u64());
    }

    const OracleResult oracle = min_discrepancy_bruteforce(sys);
    const BeckFialaResult bf = beck_fiala_color(sys);
    FullColoringParams params;
    params.seed = derive_seed(0xACCE97ull, k, 1);
    const FullColoringReport lm = full_color(sys, params);

    Row& row = rows[static_cast<std::size_t>(k)];
    row.ok = true;
    if (oracle.min_disc > bf.achieved_disc) {
      row.ok = false;
      row.why = "oracle above beck-fiala";
    }
    if (lm.success && oracle.min_disc > lm.achieved_disc) {
      row.ok = false;
      row.why = "oracle above lm";
    }
    if (!lm.success) {
      row.ok = false;
      row.why = "lm failed to color";
    }
    const int slack = std::max(0, 2 * bf.trace.t_eff - 1);
    if (bf.achieved_disc > oracle.min_disc + slack) {
      row.ok = false;
      row.why = "beck-fiala above oracle + 2t-1";
    }
  });
  int bad = 0;
  std::string first;
  for (const auto& row : rows)
    if (!row.ok) {
      ++bad;
      if (first.empty()) first = row.why;
    }
  r.pass = bad == 0;
  r.detail = "violations=" + std::to_string(bad) + "/100" +
             (first.empty() ? "" : " (" + first + ")");
}

static void criterion_success_rate(CriterionResult& r) {
  const WalkClaimsStats& st = walk_stats();
  r.pass = st.success_rate >= 0.05;
  r.soft_warning = st.success_rate >= 0.05 && st.success_rate < 0.10;
  r.detail = "single-attempt success=" + fmt(st.success_rate) +
             " (hard floor 0.05, target 0.10)";
}

static void criterion_polytope_survival(CriterionResult& r) {
  const WalkClaimsStats& st = walk_stats();
  r.pass = st.exit_fraction <= 0.05;
  r.detail = "exit fraction=" + fmt(st.exit_fraction) + " (<= 0.05)";
}

static void criterion_walk_statistics(CriterionResult& r) {
  const WalkClaimsStats& st = walk_stats();
  const bool norm_ok = st.mean_norm_ratio <= 1.05;
  const bool var_ok = st.mean_frozen_var_ratio >= 0.5;
  const bool disc_ok = st.mean_frozen_disc_ratio <= 0.3;
  const double mart2_bound = 2.0 * std::exp(-2.0) + 0.05;
  const bool mart_ok = st.martingale_freq_1 <= 2.0 * std::exp(-0.5) + 0.05 &&
                       st.martingale_freq_2 <= mart2_bound;
  r.pass = norm_ok && var_ok && disc_ok && mart_ok;
  r.detail = "E||X_T||^2/n=" + fmt(st.mean_norm_ratio) +
             " (<=1.05), E|Cvar|/n=" + fmt(st.mean_frozen_var_ratio) +
             " (>=0.5), E|Cdisc|/n=" + fmt(st.mean_frozen_disc_ratio) +
             " (<=0.3), tail(2)=" + fmt(st.martingale_freq_2) + " (<=" +
             fmt(mart2_bound) + ")";
}

static void criterion_nestedness(CriterionResult& r) {
  // Every Walker step re-asserts that frozen constraints are still in their
  // bands and only ever grow; a violation anywhere in this binary would have
  // thrown internal_error and aborted with exit 3. On top of the implicit
  // coverage from criteria 3-5 and 8, instrument a few walks explicitly.
  long long steps = 0;
  int walks = 0;
  for (int run = 0; run < 3; ++run) {
    const int n = 24;
    const SetSystem sys = generate_random(n, n, 0.5, derive_seed(66, run));
    std::vector<SparseVec> vectors;
    for (const auto& set : sys.sets)
      if (!set.empty()) vectors.push_back(SparseVec::indicator(set));
    const int m = static_cast<int>(vectors.size());
    WalkParams wp = derive_params(n, m, default_thresholds(n, std::max(m, n)),
                                  0.05, derive_seed(66, run, 1));
    wp.thresholds.resize(static_cast<std::size_t>(m), wp.thresholds.front());
    FractionalPoint x0;
    x0.values.assign(n, 0.0);
    Walker walker(vectors, x0, wp);
    Rng rng = Rng(wp.seed).substream(0);
    int last_vars = walker.frozen_var_count();
    int last_disc = walker.frozen_disc_count();
    bool monotone = true;
    while (walker.step(rng)) {
      monotone = monotone && walker.frozen_var_count() >= last_vars &&
                 walker.frozen_disc_count() >= last_disc;
      last_vars = walker.frozen_var_count();
      last_disc = walker.frozen_disc_count();
      ++steps;
    }
    ++walks;
    if (!monotone) {
      r.pass = false;
      r.detail = "frozen set shrank";
      return;
    }
  }
  r.pass = true;
  r.detail = "held at every step (" + std::to_string(walks) +
             " instrumented walks, " + std::to_string(steps) +
             " steps; plus every walk in criteria 3-5, 8)";
}

static void criterion_sampler(CriterionResult& r) {
  SamplerSuiteConfig cfg;  // 20 collections, n = 50, 10000 samples each
  const SamplerSuiteStats st = run_sampler_suite(cfg);
  const bool orth_ok = st.worst_constraint_dot <= 1e-8;
  const bool norm_ok = st.worst_norm_rel_err <= 0.05;
  const bool var_ok = st.max_probe_variance <= 1.1;
  r.pass = orth_ok && norm_ok && var_ok;
  r.detail = "max |<U,v>|/||v||=" + fmt(st.worst_constraint_dot) +
             " (<=1e-8), norm err=" + fmt(st.worst_norm_rel_err) +
             " (<=0.05), probe var=" + fmt(st.max_probe_variance) + " (<=1.1)";
}

static void criterion_full_coloring_bound(CriterionResult& r) {
  SpencerConfig cfg;  // 50 trials at n = m = 64 and n = m = 128
  const SpencerStats st = run_spencer_suite(cfg);
  const bool ratio_ok = st.max_ratio < kSpencerRegressionRatio;
  const bool no_failures = st.failures == 0;
  bool growth_ok = true;
  double growth = 0.0;
  if (st.per_size.size() >= 2 && st.per_size[0].mean_disc > 0.0) {
    growth = st.per_size[1].mean_disc / st.per_size[0].mean_disc;
    growth_ok = growth <= 1.6;
  }
  r.pass = ratio_ok && no_failures && growth_ok;
  r.detail = "max disc/scale=" + fmt(st.max_ratio) + " (<" +
             fmt(kSpencerRegressionRatio) + "), mean disc " +
             fmt(st.per_size[0].mean_disc) + " @64 -> " +
             fmt(st.per_size[1].mean_disc) + " @128, growth=" + fmt(growth) +
             " (<=1.6), failures=" + std::to_string(st.failures);
}

static void criterion_rounding(CriterionResult& r) {
  bool ok = true;
  std::string detail;

  // unbiasedness at three magnitudes, 3 binomial standard errors
  for (double value : {0.92, 0.96, 1.0}) {
    FractionalPoint x;
    x.values = {value};
    Rng rng(0x20ull + static_cast<std::uint64_t>(value * 100));
    const int reps = 10000;
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) acc += round_coloring(x, 0.08, rng).values[0];
    const double mean = acc / reps;
    const double se = std::sqrt(std::max(1.0 - value * value, 0.0) / reps);
    if (std::abs(mean - value) > 3.0 * se + 1e-12) ok = false;
    detail += "E[chi|x=" + fmt(value) + "]=" + fmt(mean) + " ";
  }

  // perturbation tail: rounding a worst-case near-integral point moves no
  // set sum past sqrt(n) in more than half the trials
  const int n = 64, m = 64;
  const double delta = 1.0 / (8.0 * std::log(static_cast<double>(m)));
  const SetSystem sys = generate_random(n, m, 0.5, 0xF00Dull);
  const int trials = 400;
  int exceed = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng(0xBEADull).substream(static_cast<std::uint64_t>(trial));
    FractionalPoint x;
    for (int i = 0; i < n; ++i)
      x.values.push_back((rng.uniform() < 0.5 ? 1.0 : -1.0) * (1.0 - delta));
    const Coloring chi = round_coloring(x, delta, rng);
    bool over = false;
    for (const auto& set : sys.sets) {
      double y = 0.0;
      for (int i : set)
        y += chi.values[static_cast<std::size_t>(i)] -
             x.values[static_cast<std::size_t>(i)];
      if (std::abs(y) > std::sqrt(static_cast<double>(n))) over = true;
    }
    if (over) ++exceed;
  }
  const double tail = static_cast<double>(exceed) / trials;
  if (tail > 0.5) ok = false;
  r.pass = ok;
  r.detail = detail + "| perturbation tail=" + fmt(tail) + " (<=0.5)";
}

static void criterion_determinism(CriterionResult& r) {
  // identical seed and parameters must reproduce every report field except
  // wall time, for each algorithm
  const SetSystem sys = generate_random(24, 24, 0.5, 0xD00Dull);
  const std::string path = "/tmp/disclab_acceptance_det.txt";
  {
    std::ofstream f(path);
    f << to_string(sys);
  }
  bool ok = true;
  std::string why;
  for (const std::string algo : {"lm", "beck-fiala", "brute"}) {
    std::ostringstream out1, out2, err;
    const int c1 = run_cli({"solve", path, "--algo", algo, "--seed", "99",
                            "--json", "--verify"},
                           out1, err);
    const int c2 = run_cli({"solve", path, "--algo", algo, "--seed", "99",
                            "--json", "--verify"},
                           out2, err);
    if (c1 != cli_exit::kOk || c2 != cli_exit::kOk) {
      ok = false;
      why = algo + " exit " + std::to_string(c1) + "/" + std::to_string(c2);
      break;
    }
    const json a = strip_wall_time(json::parse(out1.str()));
    const json b = strip_wall_time(json::parse(out2.str()));
    if (a.dump() != b.dump()) {
      ok = false;
      why = algo + " reports differ";
      break;
    }
  }
  std::remove(path.c_str());
  r.pass = ok;
  r.detail = ok ? "lm, beck-fiala, brute reports byte-identical modulo wall time"
              : why;
}

int main() {
  try {
    criterion(1, "beck-fiala bound 2t-1", criterion_beck_fiala);
    criterion(2, "oracle dominance", criterion_oracle_dominance);
    criterion(3, "partial-coloring success", criterion_success_rate);
    criterion(4, "polytope survival", criterion_polytope_survival);
    criterion(5, "walk statistics", criterion_walk_statistics);
    criterion(6, "nestedness of frozen sets", criterion_nestedness);
    criterion(7, "sampler correctness", criterion_sampler);
    criterion(8, "full-coloring bound", criterion_full_coloring_bound);
    criterion(9, "rounding unbiasedness", criterion_rounding);
    criterion(10, "determinism", criterion_determinism);
  } catch (const internal_error& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "acceptance suite error: " << e.what() << '\n';
    return 2;
  }

  int failed = 0, warned = 0;
  for (const auto& r : g_results) {
    if (!r.pass) ++failed;
    if (r.soft_warning) ++warned;
  }
  std::printf("%zu criteria: %d failed, %d soft warnings\n", g_results.size(),
              failed, warned);
  return failed == 0 ? 0 : 2;
}

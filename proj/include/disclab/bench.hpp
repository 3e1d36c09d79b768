#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "disclab/beck_fiala.hpp"
#include "disclab/full_coloring.hpp"
#include "disclab/orthobasis.hpp"
#include "disclab/parallel.hpp"
#include "disclab/partial_coloring.hpp"
#include "disclab/report.hpp"
#include "disclab/rng.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

// ---------------------------------------------------------------------------
// Walk statistics: seeded single-attempt partial colorings on random
// instances, tracking the success rate, polytope exits, and the terminal
// moments the analysis predicts.

struct WalkClaimsConfig {
  int runs = 200;
  int n = 64;
  int m = 64;
  double p = 0.5;
  double delta = 0.05;
  std::uint64_t seed = 0x5EEDB00Cull;
  int threads = 0;
};

struct WalkClaimsStats {
  int runs = 0;
  int successes = 0;
  int exits = 0;
  double success_rate = 0.0;
  double exit_fraction = 0.0;
  // Means over runs that stayed in the polytope.
  double mean_norm_ratio = 0.0;         // ||X_T - x0||^2 / n
  double mean_frozen_var_ratio = 0.0;   // |C_T^var| / n
  double mean_frozen_disc_ratio = 0.0;  // |C_T^disc| / n
  // Fraction of (run, constraint) pairs with |<X_T - x0, v_j>| at least
  // lambda * gamma * sqrt(T) * ||v_j||, against the 2 exp(-lambda^2/2) tail.
  double martingale_freq_1 = 0.0;
  double martingale_freq_2 = 0.0;
  double mean_steps = 0.0;
};

inline WalkClaimsStats run_walk_claims(const WalkClaimsConfig& cfg) {
  struct RunOutcome {
    bool success = false;
    bool exited = false;
    double norm_ratio = 0.0;
    double var_ratio = 0.0;
    double disc_ratio = 0.0;
    long long tail1 = 0, tail2 = 0, tail_total = 0;
    long long steps = 0;
  };
  std::vector<RunOutcome> outcomes(static_cast<std::size_t>(cfg.runs));

  parallel_for(
      cfg.runs,
      [&](int r) {
        const std::uint64_t inst_seed = derive_seed(cfg.seed, 2 * r);
        const std::uint64_t walk_seed = derive_seed(cfg.seed, 2 * r + 1);
        const SetSystem sys = generate_random(cfg.n, cfg.m, cfg.p, inst_seed);

        std::vector<SparseVec> vectors;
        for (const auto& set : sys.sets)
          if (!set.empty()) vectors.push_back(SparseVec::indicator(set));
        const int m_used = static_cast<int>(vectors.size());
        const double c = 8.0 * std::sqrt(std::log(
                                   2.0 * std::max(cfg.m, cfg.n) /
                                   static_cast<double>(cfg.n)));

        WalkParams wp = derive_params(
            cfg.n, std::max(m_used, 1),
            std::vector<double>(static_cast<std::size_t>(m_used), c),
            cfg.delta, walk_seed);
        wp.max_restarts = 0;

        FractionalPoint x0;
        x0.values.assign(static_cast<std::size_t>(cfg.n), 0.0);
        const PartialColoringResult res = partial_color(vectors, x0, wp);

        RunOutcome& o = outcomes[static_cast<std::size_t>(r)];
        o.success = res.success;
        o.exited = res.polytope_exit_step.has_value();
        o.steps = res.steps_taken;
        if (!o.exited) {
          double norm2 = 0.0;
          for (double v : res.x_final.values) norm2 += v * v;
          o.norm_ratio = norm2 / cfg.n;
          o.var_ratio = static_cast<double>(res.frozen_var_count) / cfg.n;
          o.disc_ratio = static_cast<double>(res.frozen_disc_count) / cfg.n;
          const double diffusion = wp.gamma * std::sqrt(static_cast<double>(wp.max_steps));
          for (const auto& v : vectors) {
            double s = 0.0;
            for (std::size_t k = 0; k < v.idx.size(); ++k)
              s += v.val[k] *
                   res.x_final.values[static_cast<std::size_t>(v.idx[k])];
            const double ratio = std::abs(s) / (diffusion * v.norm);
            ++o.tail_total;
            if (ratio >= 1.0) ++o.tail1;
            if (ratio >= 2.0) ++o.tail2;
          }
        }
      },
      cfg.threads);

  WalkClaimsStats st;
  st.runs = cfg.runs;
  long long tail1 = 0, tail2 = 0, tails = 0;
  int in_polytope = 0;
  for (const auto& o : outcomes) {
    st.successes += o.success ? 1 : 0;
    st.exits += o.exited ? 1 : 0;
    st.mean_steps += static_cast<double>(o.steps);
    if (!o.exited) {
      ++in_polytope;
      st.mean_norm_ratio += o.norm_ratio;
      st.mean_frozen_var_ratio += o.var_ratio;
      st.mean_frozen_disc_ratio += o.disc_ratio;
      tail1 += o.tail1;
      tail2 += o.tail2;
      tails += o.tail_total;
    }
  }
  st.success_rate = static_cast<double>(st.successes) / cfg.runs;
  st.exit_fraction = static_cast<double>(st.exits) / cfg.runs;
  st.mean_steps /= cfg.runs;
  if (in_polytope > 0) {
    st.mean_norm_ratio /= in_polytope;
    st.mean_frozen_var_ratio /= in_polytope;
    st.mean_frozen_disc_ratio /= in_polytope;
  }
  if (tails > 0) {
    st.martingale_freq_1 = static_cast<double>(tail1) / static_cast<double>(tails);
    st.martingale_freq_2 = static_cast<double>(tail2) / static_cast<double>(tails);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Full-coloring scaling: seeded end-to-end runs per instance size, reporting
// the discrepancy-to-scale ratio used as the regression threshold.

struct SpencerConfig {
  int trials_per_size = 50;
  std::vector<int> sizes = {64, 128};  // square instances, n = m
  double p = 0.5;
  std::uint64_t seed = 0x5EEDC0DEull;
  int threads = 0;
};

struct SpencerSizeStats {
  int n = 0;
  int trials = 0;
  int failures = 0;
  double mean_disc = 0.0;
  int max_disc = 0;
  double max_ratio = 0.0;  // achieved_disc / sqrt(n ln(2m/n))
};

struct SpencerStats {
  std::vector<SpencerSizeStats> per_size;
  double max_ratio = 0.0;
  int failures = 0;
};

inline SpencerStats run_spencer_suite(const SpencerConfig& cfg) {
  SpencerStats st;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const int n = cfg.sizes[si];
    std::vector<int> discs(static_cast<std::size_t>(cfg.trials_per_size), -1);
    parallel_for(
        cfg.trials_per_size,
        [&](int trial) {
          const std::uint64_t inst_seed =
              derive_seed(cfg.seed, 1000 * (si + 1), 2 * trial);
          const std::uint64_t solve_seed =
              derive_seed(cfg.seed, 1000 * (si + 1), 2 * trial + 1);
          const SetSystem sys = generate_random(n, n, cfg.p, inst_seed);
          FullColoringParams params;
          params.seed = solve_seed;
          const FullColoringReport rep = full_color(sys, params);
          discs[static_cast<std::size_t>(trial)] = rep.success ? rep.achieved_disc : -1;
        },
        cfg.threads);

    SpencerSizeStats s;
    s.n = n;
    s.trials = cfg.trials_per_size;
    const double scale = disc_bound_scale(n, n);
    int done = 0;
    for (int d : discs) {
      if (d < 0) {
        ++s.failures;
        continue;
      }
      ++done;
      s.mean_disc += d;
      s.max_disc = std::max(s.max_disc, d);
      s.max_ratio = std::max(s.max_ratio, d / scale);
    }
    if (done > 0) s.mean_disc /= done;
    st.failures += s.failures;
    st.max_ratio = std::max(st.max_ratio, s.max_ratio);
    st.per_size.push_back(s);
  }
  return st;
}

// ---------------------------------------------------------------------------
// Beck-Fiala guarantee: bounded-degree instances across an (n, t) grid; the
// 2t-1 bound must hold on every single one.

struct BeckFialaSuiteConfig {
  int instances = 200;
  std::vector<int> ns = {20, 50, 100, 200};
  std::vector<int> ts = {2, 3, 5, 10};
  std::uint64_t seed = 0x5EEDBF00ull;
  int threads = 0;
};

struct BeckFialaSuiteStats {
  int instances = 0;
  int violations = 0;
  int max_disc = 0;
  double max_disc_to_bound = 0.0;
  long long total_iterations = 0;
};

inline BeckFialaSuiteStats run_beck_fiala_suite(const BeckFialaSuiteConfig& cfg) {
  struct Outcome {
    int disc = 0;
    int bound = 0;
    bool violated = false;
    long long iterations = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.instances));
  const int combos = static_cast<int>(cfg.ns.size() * cfg.ts.size());

  parallel_for(
      cfg.instances,
      [&](int k) {
        const int combo = k % combos;
        const int n = cfg.ns[static_cast<std::size_t>(combo) % cfg.ns.size()];
        const int t = cfg.ts[static_cast<std::size_t>(combo) / cfg.ns.size()];
        const int m = (k / combos) % 3 == 0   ? n
                      : (k / combos) % 3 == 1 ? 2 * n
                                              : std::max(2, n / 2);
        const SetSystem sys =
            generate_bounded_degree(n, m, t, derive_seed(cfg.seed, k));
        const BeckFialaResult res = beck_fiala_color(sys, t);
        Outcome& o = outcomes[static_cast<std::size_t>(k)];
        o.disc = res.achieved_disc;
        o.bound = 2 * t - 1;
        o.violated = res.achieved_disc > 2 * t - 1;
        o.iterations = res.trace.iterations;
      },
      cfg.threads);

  BeckFialaSuiteStats st;
  st.instances = cfg.instances;
  for (const auto& o : outcomes) {
    st.violations += o.violated ? 1 : 0;
    st.max_disc = std::max(st.max_disc, o.disc);
    if (o.bound > 0)
      st.max_disc_to_bound =
          std::max(st.max_disc_to_bound,
                   static_cast<double>(o.disc) / static_cast<double>(o.bound));
    st.total_iterations += o.iterations;
  }
  return st;
}

// ---------------------------------------------------------------------------
// Sampler checks: random constraint collections; samples must be orthogonal
// to every constraint, carry the right total variance, and obey the scalar
// Gaussian tail in every direction.

struct SamplerSuiteConfig {
  int collections = 20;
  int n = 50;
  int samples = 10000;
  int probes = 20;  // random unit directions per collection
  std::uint64_t seed = 0x5EEDBA51ull;
  int threads = 0;
};

struct SamplerSuiteStats {
  int collections = 0;
  double worst_constraint_dot = 0.0;  // max |<U, v>| / ||v|| over all samples
  double worst_norm_rel_err = 0.0;    // |mean ||U||^2 - dim| / dim
  double max_probe_variance = 0.0;    // max over probes of var(<U, w>)
  double tail_freq_1 = 0.0, tail_freq_2 = 0.0, tail_freq_3 = 0.0;
  bool orthogonality_ok = true;
};

inline SamplerSuiteStats run_sampler_suite(const SamplerSuiteConfig& cfg) {
  struct Outcome {
    double worst_dot = 0.0;
    double norm_rel_err = 0.0;
    double max_probe_var = 0.0;
    long long tail1 = 0, tail2 = 0, tail3 = 0, tail_total = 0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.collections));

  parallel_for(
      cfg.collections,
      [&](int k) {
        Rng rng = Rng(cfg.seed).substream(static_cast<std::uint64_t>(k));
        const int n = cfg.n;

        ConstraintCollection cc;
        const int fz = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n / 3)));
        std::vector<int> coords(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < fz; ++i) {
          const std::size_t at = static_cast<std::size_t>(i) +
                                 rng.uniform_below(static_cast<std::uint64_t>(n - i));
          std::swap(coords[static_cast<std::size_t>(i)], coords[at]);
          cc.frozen_coords.push_back(coords[static_cast<std::size_t>(i)]);
        }
        const int dc = static_cast<int>(rng.uniform_below(12));
        for (int j = 0; j < dc; ++j) {
          if (!cc.dense_constraints.empty() && rng.uniform() < 0.25) {
            // scaled duplicate: exercises the rank tolerance
            auto dup = cc.dense_constraints.back();
            const double scale = 0.5 + rng.uniform() * 5.0;
            for (double& v : dup) v *= scale;
            cc.dense_constraints.push_back(std::move(dup));
            continue;
          }
          std::vector<double> v(static_cast<std::size_t>(n));
          for (double& e : v) e = rng.normal();
          cc.dense_constraints.push_back(std::move(v));
        }

        const OrthonormalBasis basis = build_basis(n, cc);
        const int dim = basis.dim();
        Outcome& o = outcomes[static_cast<std::size_t>(k)];
        if (dim == 0) return;

        std::vector<std::vector<double>> probes;
        for (int p = 0; p < cfg.probes; ++p) {
          std::vector<double> w(static_cast<std::size_t>(n));
          double norm2 = 0.0;
          for (double& e : w) {
            e = rng.normal();
            norm2 += e * e;
          }
          const double inv = 1.0 / std::sqrt(norm2);
          for (double& e : w) e *= inv;
          probes.push_back(std::move(w));
        }
        std::vector<double> probe_sum(probes.size(), 0.0);
        std::vector<double> probe_sq(probes.size(), 0.0);

        double norm_acc = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
          const std::vector<double> u = sample_gaussian(basis, rng);
          double norm2 = 0.0;
          for (double e : u) norm2 += e * e;
          norm_acc += norm2;
          for (const auto& v : cc.dense_constraints) {
            double dot = 0.0, vn = 0.0;
            for (int i = 0; i < n; ++i) {
              dot += u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
              vn += v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
            }
            o.worst_dot = std::max(o.worst_dot, std::abs(dot) / std::sqrt(vn));
          }
          for (int i : cc.frozen_coords)
            o.worst_dot = std::max(o.worst_dot, std::abs(u[static_cast<std::size_t>(i)]));
          for (std::size_t p = 0; p < probes.size(); ++p) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i)
              dot += u[static_cast<std::size_t>(i)] * probes[p][static_cast<std::size_t>(i)];
            probe_sum[p] += dot;
            probe_sq[p] += dot * dot;
            ++o.tail_total;
            const double a = std::abs(dot);
            if (a >= 1.0) ++o.tail1;
            if (a >= 2.0) ++o.tail2;
            if (a >= 3.0) ++o.tail3;
          }
        }
        o.norm_rel_err = std::abs(norm_acc / cfg.samples - dim) / dim;
        for (std::size_t p = 0; p < probes.size(); ++p) {
          const double mean = probe_sum[p] / cfg.samples;
          const double var = probe_sq[p] / cfg.samples - mean * mean;
          o.max_probe_var = std::max(o.max_probe_var, var);
        }
      },
      cfg.threads);

  SamplerSuiteStats st;
  st.collections = cfg.collections;
  long long t1 = 0, t2 = 0, t3 = 0, tt = 0;
  for (const auto& o : outcomes) {
    st.worst_constraint_dot = std::max(st.worst_constraint_dot, o.worst_dot);
    st.worst_norm_rel_err = std::max(st.worst_norm_rel_err, o.norm_rel_err);
    st.max_probe_variance = std::max(st.max_probe_variance, o.max_probe_var);
    t1 += o.tail1;
    t2 += o.tail2;
    t3 += o.tail3;
    tt += o.tail_total;
  }
  if (tt > 0) {
    st.tail_freq_1 = static_cast<double>(t1) / static_cast<double>(tt);
    st.tail_freq_2 = static_cast<double>(t2) / static_cast<double>(tt);
    st.tail_freq_3 = static_cast<double>(t3) / static_cast<double>(tt);
  }
  st.orthogonality_ok = st.worst_constraint_dot <= 1e-8;
  return st;
}

}  // namespace disclab

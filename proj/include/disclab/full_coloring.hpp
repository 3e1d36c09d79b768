#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/oracle.hpp"
#include "disclab/partial_coloring.hpp"
#include "disclab/rng.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

// Remaining actives at or below this count are finished exactly by
// enumeration instead of running the walk on a tiny subspace.
inline constexpr int kBruteTailFloor = 8;

struct FullColoringParams {
  std::optional<double> delta_override;  // default: min(0.099, 1/(8 ln max(m,3)))
  int restarts_per_phase = 50;           // walk restart budget inside a phase
  int phase_retries = 3;                 // whole-phase retries with fresh seeds
  std::uint64_t seed = 0;
  double k_target = 0.0;  // report-only scale factor for the disc bound
};

struct PhaseRecord {
  int active_before = 0;
  int active_after = 0;
  int constraints = 0;  // nonempty restricted sets
  double threshold = 0.0;
  double gamma = 0.0;
  long long step_budget = 0;
  long long steps_taken = 0;
  int frozen_vars = 0;
  int frozen_disc = 0;
  int restarts = 0;
  int attempts_exited = 0;
};

struct RoundingRecord {
  int flipped = 0;  // coordinates rounded against their sign
  double pre_round_fractional_disc = 0.0;
};

struct FullColoringReport {
  Coloring coloring;
  int achieved_disc = 0;
  bool success = false;
  int iterations = 0;  // partial-coloring phases run
  double delta = 0.0;
  std::vector<PhaseRecord> phases;
  RoundingRecord rounding;
  int brute_tail_size = 0;
  std::string failure_reason;
};

// Per-set walk threshold c = 8 sqrt(ln(2m/n)). With m >= n the feasibility
// budget holds: m * (n/2m)^4 <= n/16, with equality at m = n.
inline std::vector<double> default_thresholds(int n_active, int m) {
  if (n_active < 1 || m < 1)
    throw contract_error("default_thresholds needs n_active, m >= 1");
  const double c = 8.0 * std::sqrt(std::log(2.0 * static_cast<double>(m) /
                                            static_cast<double>(n_active)));
  return std::vector<double>(static_cast<std::size_t>(m), c);
}

inline double default_delta(int m) {
  return std::min(0.099, 1.0 / (8.0 * std::log(static_cast<double>(std::max(m, 3)))));
}

// Rounds a near-integral point to signs: chi_i = sign(x_i) with probability
// (1+|x_i|)/2, so E[chi_i] = x_i. Exact +/-1 entries round deterministically.
// Every coordinate must satisfy |x_i| >= 1 - delta.
inline Coloring round_coloring(const FractionalPoint& x, double delta, Rng& rng) {
  Coloring chi;
  chi.values.reserve(x.values.size());
  for (int i = 0; i < x.size(); ++i) {
    const double v = x.clamped(i);
    if (std::abs(v) < 1.0 - delta)
      throw contract_error("coordinate " + std::to_string(i) +
                           " is not near-integral: |" + std::to_string(v) +
                           "| < 1 - delta");
    const int toward = v >= 0.0 ? 1 : -1;
    const double p = (1.0 + std::abs(v)) / 2.0;
    chi.values.push_back(rng.uniform() < p ? toward : -toward);
  }
  return chi;
}

// Iterated partial coloring: each phase walks the still-active coordinates
// (|x_i| < 1 - delta) against the restricted set system, halving the active
// count; the last few actives are finished exactly and the near-integral
// rest is rounded randomly.
inline FullColoringReport full_color(const SetSystem& sys,
                                     const FullColoringParams& params) {
  if (sys.n < 1) throw contract_error("full_color needs n >= 1");
  FullColoringReport rep;
  rep.delta = params.delta_override ? *params.delta_override
                                    : default_delta(sys.m());
  if (!(rep.delta > 0.0 && rep.delta < 0.1))
    throw contract_error("delta must lie in (0, 0.1)");
  const double delta = rep.delta;

  std::vector<double> x(static_cast<std::size_t>(sys.n), 0.0);
  const int phase_cap =
      4 * static_cast<int>(std::ceil(std::log2(std::max(sys.n, 2)))) + 10;

  auto collect_active = [&] {
    std::vector<int> active;
    for (int i = 0; i < sys.n; ++i)
      if (std::abs(x[static_cast<std::size_t>(i)]) < 1.0 - delta)
        active.push_back(i);
    return active;
  };

  std::vector<int> active = collect_active();
  for (int phase = 0; static_cast<int>(active.size()) > kBruteTailFloor;
       ++phase) {
    if (phase >= phase_cap) {
      rep.success = false;
      rep.failure_reason = "phase cap reached with " +
                           std::to_string(active.size()) + " active points";
      rep.coloring.values.assign(static_cast<std::size_t>(sys.n), 1);
      rep.achieved_disc = discrepancy(sys, rep.coloring);
      return rep;
    }

    const int n_active = static_cast<int>(active.size());
    Restriction restricted = restrict_system(sys, active);

    // Sets that became empty under restriction impose nothing this phase.
    std::vector<SparseVec> vectors;
    for (const auto& set : restricted.system.sets)
      if (!set.empty()) vectors.push_back(SparseVec::indicator(set));
    const int m_actual = static_cast<int>(vectors.size());
    // Fewer sets than points: pad the count logically so the threshold
    // formula keeps its feasibility margin.
    const int m_eff = std::max(std::max(m_actual, n_active), 1);

    const double c = 8.0 * std::sqrt(std::log(
                               2.0 * static_cast<double>(m_eff) /
                               static_cast<double>(n_active)));
    WalkParams wp = derive_params(
        n_active, m_eff,
        std::vector<double>(static_cast<std::size_t>(m_actual), c), delta,
        /*seed=*/0);
    wp.max_restarts = params.restarts_per_phase;

    FractionalPoint x0;
    x0.values.reserve(static_cast<std::size_t>(n_active));
    for (int i : active) x0.values.push_back(x[static_cast<std::size_t>(i)]);

    PhaseRecord pr;
    pr.active_before = n_active;
    pr.constraints = m_actual;
    pr.threshold = c;
    pr.gamma = wp.gamma;
    pr.step_budget = wp.max_steps;

    PartialColoringResult res;
    bool ok = false;
    for (int attempt = 0; attempt <= params.phase_retries && !ok; ++attempt) {
      wp.seed = derive_seed(params.seed, static_cast<std::uint64_t>(phase + 1),
                            static_cast<std::uint64_t>(attempt));
      res = partial_color(vectors, x0, wp);
      pr.restarts += res.restarts_used;
      pr.attempts_exited += res.attempts_exited;
      ok = res.success;
    }
    pr.steps_taken = res.steps_taken;
    pr.frozen_vars = res.frozen_var_count;
    pr.frozen_disc = res.frozen_disc_count;

    if (!ok) {
      rep.iterations = phase + 1;
      rep.phases.push_back(pr);
      rep.success = false;
      rep.failure_reason = "partial coloring exhausted its restart budget in phase " +
                           std::to_string(phase);
      rep.coloring.values.assign(static_cast<std::size_t>(sys.n), 1);
      rep.achieved_disc = discrepancy(sys, rep.coloring);
      return rep;
    }

    for (int k = 0; k < n_active; ++k)
      x[static_cast<std::size_t>(active[static_cast<std::size_t>(k)])] =
          res.x_final.values[static_cast<std::size_t>(k)];

    active = collect_active();
    pr.active_after = static_cast<int>(active.size());
    rep.phases.push_back(pr);
    rep.iterations = phase + 1;
  }

  rep.brute_tail_size = static_cast<int>(active.size());
  {
    FractionalPoint frac;
    frac.values = x;
    rep.rounding.pre_round_fractional_disc = fractional_discrepancy(sys, frac);
  }

  // Round the near-integral coordinates, then finish the small tail exactly.
  std::vector<char> is_active(static_cast<std::size_t>(sys.n), 0);
  for (int i : active) is_active[static_cast<std::size_t>(i)] = 1;

  Rng round_rng = Rng(params.seed).substream(0xC01DULL);
  std::vector<int> fixed(static_cast<std::size_t>(sys.n), 0);
  int flipped = 0;
  for (int i = 0; i < sys.n; ++i) {
    if (is_active[static_cast<std::size_t>(i)]) continue;
    FractionalPoint one;
    one.values = {x[static_cast<std::size_t>(i)]};
    const Coloring c = round_coloring(one, delta, round_rng);
    fixed[static_cast<std::size_t>(i)] = c.values[0];
    const int toward = x[static_cast<std::size_t>(i)] >= 0.0 ? 1 : -1;
    if (c.values[0] != toward) ++flipped;
  }
  rep.rounding.flipped = flipped;

  if (active.empty()) {
    rep.coloring.values = fixed;
  } else {
    rep.coloring = complete_min_discrepancy(sys, fixed).witness;
  }
  rep.achieved_disc = discrepancy(sys, rep.coloring);
  rep.success = true;
  return rep;
}

}  // namespace disclab

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/orthobasis.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

struct BeckFialaTrace {
  int t_eff = 0;         // max degree of the instance
  long long iterations = 0;
  std::vector<int> decided_per_iter;

  struct SetRecord {
    bool ever_unstable = false;
    long long stabilized_at = 0;   // iteration index, 0 = stable from the start
    double sum_at_stabilization = 0.0;
    int undecided_at_stabilization = 0;
  };
  std::vector<SetRecord> sets;
};

struct BeckFialaResult {
  Coloring coloring;
  BeckFialaTrace trace;
  int achieved_disc = 0;
  int bound = 0;  // 2t - 1 (0 when t = 0)
};

// Deterministic coloring with discrepancy at most 2t-1, t the max degree.
// Starting from the all-zero fractional point, each iteration moves along a
// null-space direction of the unstable sets (those with more than t
// undecided members, which keep an exactly balanced sum) until at least one
// undecided variable reaches +/-1. Sets that drop to <= t undecided members
// become stable permanently and stop constraining the motion.
//
// `assert_t` optionally checks the final discrepancy against 2*assert_t - 1
// as well; it does not influence the algorithm.
inline BeckFialaResult beck_fiala_color(const SetSystem& sys,
                                        std::optional<int> assert_t = std::nullopt) {
  if (sys.n < 1) throw contract_error("beck_fiala_color needs n >= 1");
  constexpr double kSnap = 1e-6;
  constexpr double kDirTol = 1e-12;
  constexpr double kSumTol = 1e-9;

  const int n = sys.n;
  const int m = sys.m();
  const int t = max_degree(sys);

  BeckFialaResult out;
  out.trace.t_eff = t;
  out.trace.sets.resize(static_cast<std::size_t>(m));

  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::vector<char> decided(static_cast<std::size_t>(n), 0);
  int undecided = n;

  std::vector<char> unstable(static_cast<std::size_t>(m), 0);
  int unstable_count = 0;
  for (int j = 0; j < m; ++j) {
    const int size = static_cast<int>(sys.sets[static_cast<std::size_t>(j)].size());
    auto& rec = out.trace.sets[static_cast<std::size_t>(j)];
    if (size > t) {
      unstable[static_cast<std::size_t>(j)] = 1;
      ++unstable_count;
    } else {
      rec.undecided_at_stabilization = size;  // stable from the start, sum 0
    }
  }

  auto set_sum = [&](int j) {
    double s = 0.0;
    for (int i : sys.sets[static_cast<std::size_t>(j)])
      s += x[static_cast<std::size_t>(i)];
    return s;
  };

  while (undecided > 0) {
    const long long iter = out.trace.iterations + 1;
    if (unstable_count >= undecided)
      throw internal_error("unstable set count " + std::to_string(unstable_count) +
                           " reached undecided count " + std::to_string(undecided));

    ConstraintCollection cc;
    for (int i = 0; i < n; ++i)
      if (decided[static_cast<std::size_t>(i)]) cc.frozen_coords.push_back(i);
    for (int j = 0; j < m; ++j)
      if (unstable[static_cast<std::size_t>(j)]) {
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        for (int i : sys.sets[static_cast<std::size_t>(j)])
          row[static_cast<std::size_t>(i)] = 1.0;
        cc.dense_constraints.push_back(std::move(row));
      }
    const OrthonormalBasis basis = build_basis(n, cc, /*max_dim=*/1);
    if (basis.dim() == 0)
      throw internal_error("no null-space direction despite spare variables");
    std::vector<double> dir = basis.vector(0);

    // Fix the direction's sign by its first non-negligible coordinate, then
    // compare the step needed in each orientation; the smaller wins, ties +.
    for (int i = 0; i < n; ++i) {
      if (std::abs(dir[static_cast<std::size_t>(i)]) > kDirTol) {
        if (dir[static_cast<std::size_t>(i)] < 0.0)
          for (double& v : dir) v = -v;
        break;
      }
    }
    auto first_hit = [&](double orient) {
      double alpha = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (decided[static_cast<std::size_t>(i)]) continue;
        const double di = orient * dir[static_cast<std::size_t>(i)];
        if (std::abs(di) <= kDirTol) continue;
        const double room = di > 0.0 ? 1.0 - x[static_cast<std::size_t>(i)]
                                     : -1.0 - x[static_cast<std::size_t>(i)];
        alpha = std::min(alpha, room / di);
      }
      return alpha;
    };
    const double a_plus = first_hit(1.0);
    const double a_minus = first_hit(-1.0);
    if (!std::isfinite(a_plus) || !std::isfinite(a_minus))
      throw internal_error("null-space direction has no support on undecided variables");
    const double orient = a_plus <= a_minus ? 1.0 : -1.0;
    const double alpha = std::min(a_plus, a_minus);

    int newly_decided = 0;
    for (int i = 0; i < n; ++i) {
      if (decided[static_cast<std::size_t>(i)]) continue;
      double v = x[static_cast<std::size_t>(i)] +
                 alpha * orient * dir[static_cast<std::size_t>(i)];
      if (std::abs(v - 1.0) <= kSnap)
        v = 1.0;
      else if (std::abs(v + 1.0) <= kSnap)
        v = -1.0;
      x[static_cast<std::size_t>(i)] = v;
      if (v == 1.0 || v == -1.0) {
        decided[static_cast<std::size_t>(i)] = 1;
        ++newly_decided;
        --undecided;
      }
    }
    if (newly_decided == 0)
      throw internal_error("elimination step decided no variable");

    // Update set bookkeeping for every set touching a newly decided point.
    for (int j = 0; j < m; ++j) {
      int undec = 0;
      for (int i : sys.sets[static_cast<std::size_t>(j)])
        if (!decided[static_cast<std::size_t>(i)]) ++undec;
      if (unstable[static_cast<std::size_t>(j)] && undec <= t) {
        unstable[static_cast<std::size_t>(j)] = 0;
        --unstable_count;
        auto& rec = out.trace.sets[static_cast<std::size_t>(j)];
        rec.ever_unstable = true;
        rec.stabilized_at = iter;
        rec.sum_at_stabilization = set_sum(j);
        rec.undecided_at_stabilization = undec;
        if (std::abs(rec.sum_at_stabilization) > kSumTol)
          throw internal_error("set " + std::to_string(j) +
                               " stabilized with nonzero sum " +
                               std::to_string(rec.sum_at_stabilization));
      }
    }
    for (int j = 0; j < m; ++j)
      if (unstable[static_cast<std::size_t>(j)] &&
          std::abs(set_sum(j)) > kSumTol)
        throw internal_error("unstable set " + std::to_string(j) +
                             " drifted off balance");

    out.trace.iterations = iter;
    out.trace.decided_per_iter.push_back(newly_decided);
  }

  out.coloring.values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.coloring.values.push_back(x[static_cast<std::size_t>(i)] > 0.0 ? 1 : -1);
  out.achieved_disc = discrepancy(sys, out.coloring);
  out.bound = t == 0 ? 0 : 2 * t - 1;

  if (out.achieved_disc > out.bound)
    throw internal_error("discrepancy " + std::to_string(out.achieved_disc) +
                         " exceeds guarantee " + std::to_string(out.bound));
  if (assert_t && *assert_t >= 1 && out.achieved_disc > 2 * *assert_t - 1)
    throw internal_error("discrepancy exceeds caller-asserted bound 2t-1 for t=" +
                         std::to_string(*assert_t));
  for (int j = 0; j < m; ++j) {
    const auto& rec = out.trace.sets[static_cast<std::size_t>(j)];
    double final_sum = 0.0;
    for (int i : sys.sets[static_cast<std::size_t>(j)])
      final_sum += out.coloring.values[static_cast<std::size_t>(i)];
    const double drift = std::abs(final_sum - rec.sum_at_stabilization);
    if (drift >= 2.0 * rec.undecided_at_stabilization + kSumTol)
      throw internal_error("set " + std::to_string(j) +
                           " drifted " + std::to_string(drift) +
                           " after stabilizing with " +
                           std::to_string(rec.undecided_at_stabilization) +
                           " undecided members");
  }
  return out;
}

}  // namespace disclab

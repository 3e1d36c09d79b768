#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/partial_coloring.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

struct OracleResult {
  int min_disc = 0;
  Coloring witness;
  std::uint64_t colorings_examined = 0;
};

namespace detail {

// Discrepancy with early abort once the running max reaches `cutoff`
// (pruning only skips work, never changes the max that would be found
// below the cutoff).
inline int discrepancy_below(const SetSystem& sys, const std::vector<int>& chi,
                             int cutoff) {
  int worst = 0;
  for (const auto& set : sys.sets) {
    int s = 0;
    for (int i : set) s += chi[static_cast<std::size_t>(i)];
    s = std::abs(s);
    if (s > worst) {
      worst = s;
      if (worst >= cutoff) return worst;
    }
  }
  return worst;
}

}  // namespace detail

// Exact minimum discrepancy by exhaustive enumeration. The first point is
// pinned to +1 (discrepancy is invariant under a global sign flip), so
// 2^(n-1) candidates are scanned: counter bit k holds the sign of point
// k+1, bit value 0 = +1. The witness is the first optimum in counter order.
inline OracleResult min_discrepancy_bruteforce(const SetSystem& sys,
                                               int limit = 20) {
  if (sys.n > limit)
    throw contract_error("instance size " + std::to_string(sys.n) +
                         " exceeds brute-force limit " + std::to_string(limit));
  OracleResult res;
  if (sys.n == 0) {
    res.colorings_examined = 1;
    return res;
  }

  std::vector<int> chi(static_cast<std::size_t>(sys.n), 1);
  int best = discrepancy(sys, Coloring{chi});
  std::vector<int> best_chi = chi;
  std::uint64_t examined = 1;

  const std::uint64_t total = 1ull << (sys.n - 1);
  for (std::uint64_t counter = 1; counter < total; ++counter) {
    for (int k = 0; k < sys.n - 1; ++k)
      chi[static_cast<std::size_t>(k + 1)] = (counter >> k) & 1 ? -1 : 1;
    ++examined;
    const int d = detail::discrepancy_below(sys, chi, best);
    if (d < best) {
      best = d;
      best_chi = chi;
      if (best == 0) break;
    }
  }
  res.min_disc = best;
  res.witness.values = std::move(best_chi);
  res.colorings_examined = examined;
  return res;
}

// Exhaustive best completion of a partially fixed coloring: entries of
// `fixed` are +1/-1 where decided and 0 where free. Free coordinates are
// enumerated in counter order (bit k = sign of the k-th free coordinate in
// index order, 0 = +1); the first optimum wins. Meant for small tails.
inline OracleResult complete_min_discrepancy(const SetSystem& sys,
                                             const std::vector<int>& fixed,
                                             int limit = 20) {
  if (static_cast<int>(fixed.size()) != sys.n)
    throw contract_error("fixed-coloring length does not match universe size");
  std::vector<int> free_idx;
  for (int i = 0; i < sys.n; ++i)
    if (fixed[static_cast<std::size_t>(i)] == 0) free_idx.push_back(i);
  if (static_cast<int>(free_idx.size()) > limit)
    throw contract_error("completion tail exceeds brute-force limit");

  OracleResult res;
  std::vector<int> chi = fixed;
  for (int i : free_idx) chi[static_cast<std::size_t>(i)] = 1;
  int best = discrepancy(sys, Coloring{chi});
  std::vector<int> best_chi = chi;
  std::uint64_t examined = 1;

  const std::uint64_t total = 1ull << free_idx.size();
  for (std::uint64_t counter = 1; counter < total; ++counter) {
    for (std::size_t k = 0; k < free_idx.size(); ++k)
      chi[static_cast<std::size_t>(free_idx[k])] = (counter >> k) & 1 ? -1 : 1;
    ++examined;
    const int d = detail::discrepancy_below(sys, chi, best);
    if (d < best) {
      best = d;
      best_chi = chi;
      if (best == 0) break;
    }
  }
  res.min_disc = best;
  res.witness.values = std::move(best_chi);
  res.colorings_examined = examined;
  return res;
}

struct VerifyOutcome {
  bool pass = true;
  std::vector<std::string> reasons;
};

// Independent recheck of a partial-coloring result: every constraint within
// its threshold (recomputed from scratch) and at least half the coordinates
// inside the near-unit band.
inline VerifyOutcome verify_partial(const PartialColoringResult& result,
                                    const std::vector<SparseVec>& vectors,
                                    const FractionalPoint& x0,
                                    const WalkParams& params) {
  VerifyOutcome out;
  const int n = x0.size();
  if (result.x_final.size() != n) {
    out.pass = false;
    out.reasons.push_back("result length mismatch");
    return out;
  }
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    const auto& v = vectors[j];
    double s = 0.0;
    for (std::size_t k = 0; k < v.idx.size(); ++k) {
      const int i = v.idx[k];
      s += v.val[k] * (result.x_final.values[static_cast<std::size_t>(i)] -
                       x0.clamped(i));
    }
    const double bound = params.thresholds[j] * v.norm;
    if (std::abs(s) > bound + kPolytopeSlack) {
      out.pass = false;
      out.reasons.push_back("constraint " + std::to_string(j) + ": |" +
                            std::to_string(s) + "| > " + std::to_string(bound));
    }
  }
  int in_band = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(result.x_final.values[static_cast<std::size_t>(i)]) >=
        1.0 - params.delta)
      ++in_band;
  if (2 * in_band < n) {
    out.pass = false;
    out.reasons.push_back("only " + std::to_string(in_band) + " of " +
                          std::to_string(n) + " coordinates are near-integral");
  }
  return out;
}

}  // namespace disclab

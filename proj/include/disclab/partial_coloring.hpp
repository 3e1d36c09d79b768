#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/orthobasis.hpp"
#include "disclab/rng.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

// Step budget: T = ceil(kStepBudget / gamma^2).
inline constexpr double kStepBudget = 16.0 / 3.0;
// Log constant in the step-size rule gamma = delta / sqrt(kGammaLog * ln(2 + nm/delta)).
inline constexpr double kGammaLog = 40.0;
// Floating-point overshoot tolerated on a polytope face before the walk
// counts as having left it.
inline constexpr double kPolytopeSlack = 1e-9;

// Constraint vector in sparse form. `norm` is the Euclidean norm, cached
// because every threshold is expressed in units of it.
struct SparseVec {
  std::vector<int> idx;
  std::vector<double> val;
  double norm = 0.0;

  static SparseVec from_dense(std::span<const double> v) {
    SparseVec s;
    double n2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0) {
        s.idx.push_back(static_cast<int>(i));
        s.val.push_back(v[i]);
        n2 += v[i] * v[i];
      }
    }
    s.norm = std::sqrt(n2);
    return s;
  }

  // Indicator vector of a set of coordinate indices.
  static SparseVec indicator(const std::vector<int>& set) {
    SparseVec s;
    s.idx = set;
    s.val.assign(set.size(), 1.0);
    s.norm = std::sqrt(static_cast<double>(set.size()));
    return s;
  }

  std::vector<double> dense(int n) const {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k)
      v[static_cast<std::size_t>(idx[k])] = val[k];
    return v;
  }
};

inline std::vector<SparseVec> sparsify(const std::vector<std::vector<double>>& dense) {
  std::vector<SparseVec> out;
  out.reserve(dense.size());
  for (const auto& v : dense) out.push_back(SparseVec::from_dense(v));
  return out;
}

inline std::vector<SparseVec> indicator_vectors(const SetSystem& sys) {
  std::vector<SparseVec> out;
  out.reserve(sys.sets.size());
  for (const auto& set : sys.sets) out.push_back(SparseVec::indicator(set));
  return out;
}

// Parameters of one random-walk attempt. Thresholds are in normalized
// units: constraint j confines the walk to |<x - x0, v_j>| <= c_j * ||v_j||.
struct WalkParams {
  double delta = 0.0;
  double gamma = 0.0;
  long long max_steps = 0;
  std::vector<double> thresholds;
  int max_restarts = 0;
  std::uint64_t seed = 0;
};

// Threshold feasibility: sum_j exp(-c_j^2/16) <= n/16. The relative epsilon
// absorbs rounding when the sum lands exactly on the boundary.
inline void check_threshold_feasibility(int n, const std::vector<double>& thresholds) {
  double sum = 0.0;
  for (double c : thresholds) {
    if (c < 0.0) throw contract_error("thresholds must be non-negative");
    sum += std::exp(-c * c / 16.0);
  }
  const double budget = static_cast<double>(n) / 16.0;
  if (sum > budget * (1.0 + 1e-9))
    throw contract_error("infeasible thresholds: sum exp(-c^2/16) = " +
                         std::to_string(sum) + " exceeds n/16 = " +
                         std::to_string(budget));
}

// Builds walk parameters from the instance shape. The step size follows
// gamma = delta / sqrt(40 ln(2 + nm/delta)); the "+2" keeps the logarithm
// healthy for tiny nm.
inline WalkParams derive_params(int n, int m, std::vector<double> thresholds,
                                double delta, std::uint64_t seed) {
  if (n < 1 || m < 1) throw contract_error("derive_params needs n, m >= 1");
  if (!(delta > 0.0 && delta < 0.1))
    throw contract_error("delta must lie in (0, 0.1)");
  if (static_cast<int>(thresholds.size()) > m)
    throw contract_error("more thresholds than constraint vectors");
  check_threshold_feasibility(n, thresholds);

  WalkParams p;
  p.delta = delta;
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  p.gamma = delta / std::sqrt(kGammaLog * std::log(2.0 + nm / delta));
  p.max_steps = static_cast<long long>(std::ceil(kStepBudget / (p.gamma * p.gamma)));
  p.thresholds = std::move(thresholds);
  p.seed = seed;
  return p;
}

// Snapshot of a walk in progress.
struct WalkState {
  long long t = 0;
  FractionalPoint x;
  std::vector<int> frozen_vars;
  std::vector<int> frozen_disc;
  bool in_polytope = true;
};

// Outcome of one partial-coloring call (possibly after restarts).
struct PartialColoringResult {
  FractionalPoint x_final;
  bool success = false;
  int frozen_var_count = 0;
  int frozen_disc_count = 0;
  long long steps_taken = 0;
  std::optional<long long> polytope_exit_step;
  int restarts_used = 0;
  int attempts_exited = 0;  // attempts that left the polytope, across restarts
};

// One random-walk attempt: Gaussian steps confined to the subspace
// orthogonal to every constraint whose band has been entered. Coordinates
// freeze when |x_i| >= 1 - delta; constraint j freezes when
// |<x - x0, v_j>| >= (c_j - delta)||v_j||. Frozen coordinates hold their
// value exactly (the sampling basis has exact zeros there).
class Walker {
 public:
  Walker(const std::vector<SparseVec>& vectors, const FractionalPoint& x0,
         const WalkParams& params)
      : vecs_(&vectors), params_(&params), n_(x0.size()) {
    if (n_ < 1) throw contract_error("walk needs n >= 1");
    if (!x0.in_cube()) throw contract_error("x0 must lie in [-1,1]^n");
    if (!(params.delta > 0.0 && params.delta < 0.1))
      throw contract_error("delta must lie in (0, 0.1)");
    if (params.thresholds.size() != vectors.size())
      throw contract_error("one threshold required per constraint vector");
    check_threshold_feasibility(n_, params.thresholds);

    m_ = static_cast<int>(vectors.size());
    x0_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x0_[static_cast<std::size_t>(i)] = x0.clamped(i);
    x_ = x0_;
    u_.assign(static_cast<std::size_t>(n_), 0.0);
    frozen_var_.assign(static_cast<std::size_t>(n_), 0);
    frozen_disc_.assign(static_cast<std::size_t>(m_), 0);
    s_.assign(static_cast<std::size_t>(m_), 0.0);
    bound_.resize(static_cast<std::size_t>(m_));
    band_.resize(static_cast<std::size_t>(m_));
    point_sets_.assign(static_cast<std::size_t>(n_), {});

    for (int j = 0; j < m_; ++j) {
      const auto& v = vectors[static_cast<std::size_t>(j)];
      if (!(v.norm > 0.0))
        throw contract_error("constraint vector " + std::to_string(j) +
                             " has zero norm; drop empty constraints first");
      for (int i : v.idx)
        if (i < 0 || i >= n_)
          throw contract_error("constraint vector index out of range");
      const double c = params.thresholds[static_cast<std::size_t>(j)];
      bound_[static_cast<std::size_t>(j)] = c * v.norm;
      band_[static_cast<std::size_t>(j)] = (c - params.delta) * v.norm;
      for (std::size_t k = 0; k < v.idx.size(); ++k)
        point_sets_[static_cast<std::size_t>(v.idx[k])].push_back(
            {j, v.val[k]});
    }

    // Constraints already inside their band at the start freeze immediately
    // (a threshold c_j <= delta freezes set j from step 0).
    for (int i = 0; i < n_; ++i)
      if (std::abs(x_[static_cast<std::size_t>(i)]) >= 1.0 - params.delta) {
        frozen_var_[static_cast<std::size_t>(i)] = 1;
        ++frozen_var_count_;
      }
    for (int j = 0; j < m_; ++j)
      if (std::abs(s_[static_cast<std::size_t>(j)]) >=
          band_[static_cast<std::size_t>(j)]) {
        frozen_disc_[static_cast<std::size_t>(j)] = 1;
        ++frozen_disc_count_;
      }
    rebuild();
  }

  // Advances one step. Returns false when the walk has finished: step budget
  // exhausted, subspace dimension reached zero, or the polytope was left.
  bool step(Rng& rng) {
    if (done_) return false;
    if (t_ >= params_->max_steps || basis_.dim() == 0) {
      done_ = true;
      return false;
    }

    const double gamma = params_->gamma;
    const double delta = params_->delta;
    basis_.draw_coefficients(rng, coeffs_);
    basis_.combine(coeffs_, compact_);
    const auto& free = basis_.free_coords();
    for (std::size_t c = 0; c < free.size(); ++c)
      u_[static_cast<std::size_t>(free[c])] = compact_[c];

    bool exited = false;
    new_vars_.clear();
    new_sets_.clear();
    clamps_.clear();

    for (std::size_t c = 0; c < free.size(); ++c) {
      const int i = free[c];
      double xi = x_[static_cast<std::size_t>(i)] +
                  gamma * u_[static_cast<std::size_t>(i)];
      const double a = std::abs(xi);
      if (a >= 1.0 - delta) {
        if (a > 1.0 + kPolytopeSlack) {
          exited = true;
        } else if (a > 1.0) {
          const double snapped = xi > 0.0 ? 1.0 : -1.0;
          clamps_.push_back({i, snapped - xi});
          xi = snapped;
        }
        if (!exited) new_vars_.push_back(i);
      }
      x_[static_cast<std::size_t>(i)] = xi;
    }

    // Running inner products; frozen constraints are orthogonal to the step
    // by construction and keep their value.
    for (int j : active_sets_) {
      const auto& v = (*vecs_)[static_cast<std::size_t>(j)];
      double du = 0.0;
      for (std::size_t k = 0; k < v.idx.size(); ++k)
        du += v.val[k] * u_[static_cast<std::size_t>(v.idx[k])];
      s_[static_cast<std::size_t>(j)] += gamma * du;
    }
    // Clamps moved x by up to the slack; keep the inner products exact.
    for (const auto& [i, dx] : clamps_)
      for (const auto& [j, val] : point_sets_[static_cast<std::size_t>(i)])
        s_[static_cast<std::size_t>(j)] += dx * val;

    for (int j : active_sets_) {
      const double a = std::abs(s_[static_cast<std::size_t>(j)]);
      if (a > bound_[static_cast<std::size_t>(j)] + kPolytopeSlack)
        exited = true;
      else if (a >= band_[static_cast<std::size_t>(j)])
        new_sets_.push_back(j);
    }

    ++t_;
    if (exited) {
      in_polytope_ = false;
      exit_step_ = t_;
      done_ = true;
      return false;
    }

    if (!new_vars_.empty() || !new_sets_.empty()) {
      for (int i : new_vars_) {
        frozen_var_[static_cast<std::size_t>(i)] = 1;
        u_[static_cast<std::size_t>(i)] = 0.0;  // stays zero from here on
        ++frozen_var_count_;
      }
      for (int j : new_sets_) {
        frozen_disc_[static_cast<std::size_t>(j)] = 1;
        ++frozen_disc_count_;
      }
      rebuild();
    }
    assert_nested();

    if (t_ >= params_->max_steps || basis_.dim() == 0) done_ = true;
    return !done_;
  }

  void run(Rng& rng) {
    while (step(rng)) {
    }
    if (in_polytope_) verify_final();
  }

  bool finished() const { return done_; }
  bool in_polytope() const { return in_polytope_; }
  long long steps_taken() const { return t_; }
  int dim() const { return basis_.dim(); }
  int frozen_var_count() const { return frozen_var_count_; }
  int frozen_disc_count() const { return frozen_disc_count_; }
  std::optional<long long> exit_step() const { return exit_step_; }
  const std::vector<double>& x() const { return x_; }

  bool success() const {
    return in_polytope_ && 2 * frozen_var_count_ >= n_;
  }

  WalkState state() const {
    WalkState st;
    st.t = t_;
    st.x.values = x_;
    st.in_polytope = in_polytope_;
    for (int i = 0; i < n_; ++i)
      if (frozen_var_[static_cast<std::size_t>(i)]) st.frozen_vars.push_back(i);
    for (int j = 0; j < m_; ++j)
      if (frozen_disc_[static_cast<std::size_t>(j)]) st.frozen_disc.push_back(j);
    return st;
  }

  PartialColoringResult result() const {
    PartialColoringResult r;
    r.x_final.values = x_;
    r.success = success();
    r.frozen_var_count = frozen_var_count_;
    r.frozen_disc_count = frozen_disc_count_;
    r.steps_taken = t_;
    r.polytope_exit_step = exit_step_;
    r.attempts_exited = exit_step_ ? 1 : 0;
    return r;
  }

 private:
  void rebuild() {
    ConstraintCollection cc;
    for (int i = 0; i < n_; ++i)
      if (frozen_var_[static_cast<std::size_t>(i)]) cc.frozen_coords.push_back(i);
    for (int j = 0; j < m_; ++j)
      if (frozen_disc_[static_cast<std::size_t>(j)])
        cc.dense_constraints.push_back((*vecs_)[static_cast<std::size_t>(j)].dense(n_));
    basis_ = build_basis(n_, cc);
    coeffs_.resize(static_cast<std::size_t>(basis_.dim()));
    compact_.resize(basis_.free_coords().size());
    active_sets_.clear();
    for (int j = 0; j < m_; ++j)
      if (!frozen_disc_[static_cast<std::size_t>(j)]) active_sets_.push_back(j);
  }

  // Frozen sets may only grow, and a frozen coordinate must still sit in its
  // band; any violation is a bug in the stepping logic.
  void assert_nested() const {
    const double lo = 1.0 - params_->delta;
    for (int i = 0; i < n_; ++i)
      if (frozen_var_[static_cast<std::size_t>(i)] &&
          std::abs(x_[static_cast<std::size_t>(i)]) < lo)
        throw internal_error("frozen coordinate " + std::to_string(i) +
                             " left its band at step " + std::to_string(t_));
    for (int j = 0; j < m_; ++j)
      if (frozen_disc_[static_cast<std::size_t>(j)] &&
          std::abs(s_[static_cast<std::size_t>(j)]) <
              band_[static_cast<std::size_t>(j)] - 1e-12)
        throw internal_error("frozen constraint " + std::to_string(j) +
                             " left its band at step " + std::to_string(t_));
  }

  // Recomputes every inner product from the final point; catches drift in
  // the incremental bookkeeping.
  void verify_final() const {
    for (int j = 0; j < m_; ++j) {
      const auto& v = (*vecs_)[static_cast<std::size_t>(j)];
      double s = 0.0;
      for (std::size_t k = 0; k < v.idx.size(); ++k) {
        const std::size_t i = static_cast<std::size_t>(v.idx[k]);
        s += v.val[k] * (x_[i] - x0_[i]);
      }
      if (std::abs(s) > bound_[static_cast<std::size_t>(j)] + kPolytopeSlack)
        throw internal_error("constraint " + std::to_string(j) +
                             " violated on recomputation: |" +
                             std::to_string(s) + "| > " +
                             std::to_string(bound_[static_cast<std::size_t>(j)]));
    }
  }

  const std::vector<SparseVec>* vecs_;
  const WalkParams* params_;
  int n_ = 0;
  int m_ = 0;

  std::vector<double> x0_, x_, u_, s_, bound_, band_;
  std::vector<char> frozen_var_, frozen_disc_;
  std::vector<std::vector<std::pair<int, double>>> point_sets_;
  std::vector<int> active_sets_;
  OrthonormalBasis basis_;
  std::vector<double> coeffs_, compact_;
  std::vector<int> new_vars_, new_sets_;
  std::vector<std::pair<int, double>> clamps_;

  long long t_ = 0;
  int frozen_var_count_ = 0;
  int frozen_disc_count_ = 0;
  bool in_polytope_ = true;
  bool done_ = false;
  std::optional<long long> exit_step_;
};

// Runs the walk from x0, restarting with a fresh substream on failure, up to
// params.max_restarts extra attempts. Returns the first success, else the
// last failure; `restarts_used` counts the extra attempts actually spent.
inline PartialColoringResult partial_color(const std::vector<SparseVec>& vectors,
                                           const FractionalPoint& x0,
                                           const WalkParams& params) {
  Rng master(params.seed);
  PartialColoringResult out;
  int exited = 0;
  for (int attempt = 0; attempt <= params.max_restarts; ++attempt) {
    Rng rng = master.substream(static_cast<std::uint64_t>(attempt));
    Walker walker(vectors, x0, params);
    walker.run(rng);
    out = walker.result();
    exited += out.attempts_exited;
    out.restarts_used = attempt;
    out.attempts_exited = exited;
    if (out.success) break;
  }
  return out;
}

inline PartialColoringResult partial_color(
    const std::vector<std::vector<double>>& vectors, const FractionalPoint& x0,
    const WalkParams& params) {
  return partial_color(sparsify(vectors), x0, params);
}

}  // namespace disclab

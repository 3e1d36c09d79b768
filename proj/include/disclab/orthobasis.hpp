#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "disclab/errors.hpp"
#include "disclab/rng.hpp"

namespace disclab {

// Constraints pinning a subspace of R^n: coordinates forced to zero, plus
// general vectors the subspace must be orthogonal to.
struct ConstraintCollection {
  std::vector<int> frozen_coords;
  std::vector<std::vector<double>> dense_constraints;
};

// Orthonormal basis of the subspace orthogonal to a constraint collection.
// Vectors are stored compactly over the non-frozen coordinates (their frozen
// entries are exact zeros), row-major, so sampling stays cache-friendly.
class OrthonormalBasis {
 public:
  OrthonormalBasis() = default;
  OrthonormalBasis(int ambient, std::vector<int> free_coords,
                   std::vector<double> rows, int dim)
      : ambient_(ambient),
        free_coords_(std::move(free_coords)),
        rows_(std::move(rows)),
        dim_(dim) {}

  int dim() const { return dim_; }
  int ambient() const { return ambient_; }
  const std::vector<int>& free_coords() const { return free_coords_; }

  std::span<const double> row(int k) const {
    const std::size_t w = free_coords_.size();
    return {rows_.data() + static_cast<std::size_t>(k) * w, w};
  }

  // Basis vector k as a full-length dense vector.
  std::vector<double> vector(int k) const {
    std::vector<double> v(static_cast<std::size_t>(ambient_), 0.0);
    const auto r = row(k);
    for (std::size_t c = 0; c < free_coords_.size(); ++c)
      v[static_cast<std::size_t>(free_coords_[c])] = r[c];
    return v;
  }

  // Gaussian weights for one sample: one standard normal per basis vector,
  // drawn in row order. `coeffs` must have length dim().
  void draw_coefficients(Rng& rng, std::span<double> coeffs) const {
    for (int k = 0; k < dim_; ++k) coeffs[static_cast<std::size_t>(k)] = rng.normal();
  }

  // out_compact[c] = sum_k coeffs[k] * row(k)[c]; length = free_coords().size().
  void combine(std::span<const double> coeffs,
               std::span<double> out_compact) const {
    const std::size_t w = free_coords_.size();
    std::fill(out_compact.begin(), out_compact.end(), 0.0);
    for (int k = 0; k < dim_; ++k) {
      const double g = coeffs[static_cast<std::size_t>(k)];
      const double* r = rows_.data() + static_cast<std::size_t>(k) * w;
      for (std::size_t c = 0; c < w; ++c) out_compact[c] += g * r[c];
    }
  }

 private:
  int ambient_ = 0;
  std::vector<int> free_coords_;
  std::vector<double> rows_;
  int dim_ = 0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Subtracts the projections of `w` onto the rows of `basis` (an
// orthonormal family laid out row-major with width w.size()).
inline void project_out(std::span<double> w, const std::vector<double>& basis,
                        std::size_t count) {
  const std::size_t width = w.size();
  for (std::size_t k = 0; k < count; ++k) {
    const double* q = basis.data() + k * width;
    double c = 0.0;
    for (std::size_t i = 0; i < width; ++i) c += w[i] * q[i];
    for (std::size_t i = 0; i < width; ++i) w[i] -= c * q[i];
  }
}

}  // namespace detail

// Orthonormal basis for the orthogonal complement of the constraint span.
// Coordinate constraints are handled exactly (the computation lives entirely
// in the free coordinates); dense constraints are orthonormalized with a
// relative rank tolerance of 1e-10, dropping dependent directions; the
// complement is completed from standard basis vectors. Two projection passes
// per vector keep the basis orthonormal to near machine precision.
//
// `max_dim` >= 0 stops completion early once that many basis vectors exist
// (used where a single complement direction suffices).
inline OrthonormalBasis build_basis(int n, const ConstraintCollection& constraints,
                                    int max_dim = -1) {
  if (n < 1) throw contract_error("build_basis needs n >= 1");
  constexpr double kRankTol = 1e-10;

  std::vector<char> frozen(static_cast<std::size_t>(n), 0);
  for (int i : constraints.frozen_coords) {
    if (i < 0 || i >= n) throw contract_error("frozen coordinate out of range");
    frozen[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<int> free_coords;
  free_coords.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (!frozen[static_cast<std::size_t>(i)]) free_coords.push_back(i);

  const std::size_t width = free_coords.size();
  if (width == 0 || max_dim == 0)
    return OrthonormalBasis(n, std::move(free_coords), {}, 0);

  // Position of each free coordinate in the compact layout.
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < width; ++c)
    pos[static_cast<std::size_t>(free_coords[c])] = static_cast<int>(c);

  // Span of the dense constraints, restricted to the free coordinates.
  std::vector<double> span_rows;  // row-major, width `width`
  std::size_t rank = 0;
  std::vector<double> scratch(width);
  for (const auto& v : constraints.dense_constraints) {
    if (static_cast<int>(v.size()) != n)
      throw contract_error("dense constraint has wrong length");
    for (std::size_t c = 0; c < width; ++c)
      scratch[c] = v[static_cast<std::size_t>(free_coords[c])];
    const double orig = detail::norm(scratch);
    if (orig <= 0.0) continue;  // no component in the free subspace
    detail::project_out(scratch, span_rows, rank);
    detail::project_out(scratch, span_rows, rank);
    const double resid = detail::norm(scratch);
    if (resid < kRankTol * orig) continue;  // dependent on earlier constraints
    for (double& x : scratch) x /= resid;
    span_rows.insert(span_rows.end(), scratch.begin(), scratch.end());
    ++rank;
    if (rank == width) break;
  }

  // Complete to a basis of the complement using standard basis vectors.
  const std::size_t want =
      max_dim < 0 ? width - rank
                  : std::min(width - rank, static_cast<std::size_t>(max_dim));
  std::vector<double> rows;
  rows.reserve(want * width);
  std::size_t dim = 0;
  for (std::size_t cand = 0; cand < width && dim < want; ++cand) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    scratch[cand] = 1.0;
    detail::project_out(scratch, span_rows, rank);
    detail::project_out(scratch, rows, dim);
    detail::project_out(scratch, span_rows, rank);
    detail::project_out(scratch, rows, dim);
    const double resid = detail::norm(scratch);
    if (resid < kRankTol) continue;
    for (double& x : scratch) x /= resid;
    rows.insert(rows.end(), scratch.begin(), scratch.end());
    ++dim;
  }

  return OrthonormalBasis(n, std::move(free_coords), std::move(rows),
                          static_cast<int>(dim));
}

// Standard Gaussian sample inside the basis span: sum of the basis vectors
// weighted by independent standard normals. The zero vector when dim = 0.
inline std::vector<double> sample_gaussian(const OrthonormalBasis& basis,
                                           Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(basis.ambient()), 0.0);
  if (basis.dim() == 0) return out;
  std::vector<double> coeffs(static_cast<std::size_t>(basis.dim()));
  std::vector<double> compact(basis.free_coords().size());
  basis.draw_coefficients(rng, coeffs);
  basis.combine(coeffs, compact);
  const auto& free = basis.free_coords();
  for (std::size_t c = 0; c < free.size(); ++c)
    out[static_cast<std::size_t>(free[c])] = compact[c];
  return out;
}

}  // namespace disclab

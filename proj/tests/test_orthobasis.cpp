#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "disclab/orthobasis.hpp"
#include "disclab/rng.hpp"

using namespace disclab;

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_orthonormal(const OrthonormalBasis& basis) {
  for (int i = 0; i < basis.dim(); ++i) {
    const auto vi = basis.vector(i);
    for (int j = i; j < basis.dim(); ++j) {
      const double d = dot(vi, basis.vector(j));
      REQUIRE(std::abs(d - (i == j ? 1.0 : 0.0)) < 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("no constraints: full space") {
  const OrthonormalBasis basis = build_basis(3, {});
  REQUIRE(basis.dim() == 3);
  require_orthonormal(basis);
}

TEST_CASE("fully frozen: empty basis and zero samples") {
  ConstraintCollection cc;
  cc.frozen_coords = {0, 1, 2, 3};
  const OrthonormalBasis basis = build_basis(4, cc);
  REQUIRE(basis.dim() == 0);
  Rng rng(1);
  const auto u = sample_gaussian(basis, rng);
  for (double v : u) REQUIRE(v == 0.0);
}

TEST_CASE("single dense constraint in the plane") {
  ConstraintCollection cc;
  cc.dense_constraints = {{1.0, 1.0}};
  const OrthonormalBasis basis = build_basis(2, cc);
  REQUIRE(basis.dim() == 1);
  const auto b = basis.vector(0);
  const double r = 1.0 / std::sqrt(2.0);
  const bool plus = std::abs(b[0] - r) < 1e-12 && std::abs(b[1] + r) < 1e-12;
  const bool minus = std::abs(b[0] + r) < 1e-12 && std::abs(b[1] - r) < 1e-12;
  REQUIRE((plus || minus));
}

TEST_CASE("parallel and duplicated constraints collapse to rank one") {
  ConstraintCollection cc;
  cc.dense_constraints = {{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {-0.5, -1.0, -1.5}};
  const OrthonormalBasis basis = build_basis(3, cc);
  REQUIRE(basis.dim() == 2);
  require_orthonormal(basis);
}

TEST_CASE("max_dim caps completion") {
  const OrthonormalBasis basis = build_basis(5, {}, 1);
  REQUIRE(basis.dim() == 1);
}

TEST_CASE("random collections: dimension, orthogonality, frozen zeros") {
  Rng rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 6 + static_cast<int>(rng.uniform_below(15));
    ConstraintCollection cc;
    const int fz = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n / 2 + 1)));
    for (int i = 0; i < fz; ++i) cc.frozen_coords.push_back(i);
    const int dc = static_cast<int>(rng.uniform_below(5));
    for (int j = 0; j < dc; ++j) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (double& e : v) e = rng.normal();
      cc.dense_constraints.push_back(std::move(v));
    }
    const OrthonormalBasis basis = build_basis(n, cc);

    // random Gaussian constraints are independent a.s., also after the
    // restriction to the free coordinates (while any room remains)
    const int expected = std::max(n - fz - dc, 0);
    REQUIRE(basis.dim() >= expected);
    require_orthonormal(basis);

    for (int k = 0; k < basis.dim(); ++k) {
      const auto b = basis.vector(k);
      for (int i : cc.frozen_coords) REQUIRE(b[static_cast<std::size_t>(i)] == 0.0);
      for (const auto& v : cc.dense_constraints) {
        const double vnorm = std::sqrt(dot(v, v));
        REQUIRE(std::abs(dot(b, v)) <= 1e-8 * vnorm);
      }
    }
  }
}

TEST_CASE("sampling: frozen coordinates exactly zero, mean square norm = dim") {
  ConstraintCollection cc;
  cc.frozen_coords = {1, 3};
  cc.dense_constraints = {{0.3, 0.0, -1.2, 0.0, 2.0, 0.4},
                          {1.0, 1.0, 1.0, 1.0, 1.0, 1.0}};
  const int n = 6;
  const OrthonormalBasis basis = build_basis(n, cc);
  const int d = basis.dim();
  REQUIRE(d == 2);  // 6 coords - 2 frozen - 2 independent dense

  Rng rng(5);
  const int samples = 10000;
  double norm_acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto u = sample_gaussian(basis, rng);
    REQUIRE(u[1] == 0.0);
    REQUIRE(u[3] == 0.0);
    norm_acc += dot(u, u);
  }
  REQUIRE(norm_acc / samples == Catch::Approx(static_cast<double>(d)).epsilon(0.05));
}

TEST_CASE("projection variance at most one, Gaussian tails hold") {
  Rng rng(17);
  const int n = 12;
  ConstraintCollection cc;
  cc.frozen_coords = {0};
  cc.dense_constraints = {{0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0}};
  const OrthonormalBasis basis = build_basis(n, cc);

  const int samples = 10000;
  for (int probe = 0; probe < 5; ++probe) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double norm2 = 0.0;
    for (double& e : w) {
      e = rng.normal();
      norm2 += e * e;
    }
    for (double& e : w) e /= std::sqrt(norm2);

    Rng sampler(100 + probe);
    double sum = 0.0, sq = 0.0;
    int tail1 = 0, tail2 = 0, tail3 = 0;
    for (int s = 0; s < samples; ++s) {
      const auto u = sample_gaussian(basis, sampler);
      const double d = dot(u, w);
      sum += d;
      sq += d * d;
      if (std::abs(d) >= 1.0) ++tail1;
      if (std::abs(d) >= 2.0) ++tail2;
      if (std::abs(d) >= 3.0) ++tail3;
    }
    const double mean = sum / samples;
    const double var = sq / samples - mean * mean;
    REQUIRE(var <= 1.1);
    REQUIRE(std::abs(mean) < 0.05);
    REQUIRE(tail1 / static_cast<double>(samples) <= 2.0 * std::exp(-0.5) + 0.02);
    REQUIRE(tail2 / static_cast<double>(samples) <= 2.0 * std::exp(-2.0) + 0.02);
    REQUIRE(tail3 / static_cast<double>(samples) <= 2.0 * std::exp(-4.5) + 0.02);
  }
}

TEST_CASE("sampling is deterministic given the rng state") {
  const OrthonormalBasis basis = build_basis(8, {});
  Rng a(9), b(9);
  for (int s = 0; s < 10; ++s) {
    REQUIRE(sample_gaussian(basis, a) == sample_gaussian(basis, b));
  }
}

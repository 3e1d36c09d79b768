#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "disclab/full_coloring.hpp"
#include "disclab/oracle.hpp"
#include "disclab/rng.hpp"
#include "disclab/set_system.hpp"

using namespace disclab;

TEST_CASE("default_thresholds: boundary and scaling") {
  const auto eq = default_thresholds(64, 64);
  REQUIRE(eq.size() == 64);
  REQUIRE(eq[0] == Catch::Approx(6.6604368892615815).epsilon(1e-12));
  // m = n sits exactly on the feasibility boundary: sum = n/16
  double sum = 0.0;
  for (double c : eq) sum += std::exp(-c * c / 16.0);
  REQUIRE(sum == Catch::Approx(64.0 / 16.0).epsilon(1e-9));

  const auto wide = default_thresholds(8, 64);  // m = 8n
  REQUIRE(wide[0] == Catch::Approx(13.320873778523163).epsilon(1e-12));
}

TEST_CASE("default_thresholds: feasible whenever m >= n") {
  for (int n : {1, 2, 5, 16, 64, 200, 1000}) {
    for (int factor : {1, 2, 3, 8, 32}) {
      const int m = n * factor;
      const auto cs = default_thresholds(n, m);
      double sum = 0.0;
      for (double c : cs) sum += std::exp(-c * c / 16.0);
      REQUIRE(sum <= n / 16.0 * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("default_delta tracks the set count and stays legal") {
  REQUIRE(default_delta(64) == Catch::Approx(0.03005614668518674).epsilon(1e-12));
  REQUIRE(default_delta(128) == Catch::Approx(0.025762411444445778).epsilon(1e-12));
  // few sets: capped below 0.1
  REQUIRE(default_delta(1) == Catch::Approx(0.099));
  REQUIRE(default_delta(2) == Catch::Approx(0.099));
  for (int m : {3, 10, 100, 100000}) {
    const double d = default_delta(m);
    REQUIRE(d > 0.0);
    REQUIRE(d < 0.1);
  }
}

TEST_CASE("round_coloring: exact endpoints are deterministic") {
  FractionalPoint x;
  x.values = {1.0, -1.0, 1.0};
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(static_cast<std::uint64_t>(trial));
    const Coloring chi = round_coloring(x, 0.05, rng);
    REQUIRE(chi.values == std::vector<int>{1, -1, 1});
  }
}

TEST_CASE("round_coloring: unbiased at x = 0.96 and x = 0.92") {
  for (double value : {0.96, 0.92}) {
    FractionalPoint x;
    x.values = {value};
    Rng rng(777);
    double acc = 0.0;
    const int reps = 10000;
    for (int r = 0; r < reps; ++r)
      acc += round_coloring(x, 0.08, rng).values[0];
    const double se = std::sqrt((1.0 - value * value) / reps);
    REQUIRE(acc / reps == Catch::Approx(value).margin(3.0 * se + 1e-9));
  }
}

TEST_CASE("round_coloring: rejects interior coordinates") {
  FractionalPoint x;
  x.values = {0.5};
  Rng rng(1);
  REQUIRE_THROWS_AS(round_coloring(x, 0.05, rng), contract_error);
}

TEST_CASE("full_color: single singleton set") {
  SetSystem sys{1, {{0}}};
  FullColoringParams params;
  params.seed = 11;
  const FullColoringReport rep = full_color(sys, params);
  REQUIRE(rep.success);
  REQUIRE(rep.achieved_disc <= 1);
  REQUIRE(rep.achieved_disc == discrepancy(sys, rep.coloring));
}

TEST_CASE("full_color: tiny universes go straight to exact search") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(7));  // <= 8
    const SetSystem sys = generate_random(n, n + 2, 0.5, rng.next_u64());
    FullColoringParams params;
    params.seed = trial;
    const FullColoringReport rep = full_color(sys, params);
    REQUIRE(rep.success);
    REQUIRE(rep.iterations == 0);
    REQUIRE(rep.brute_tail_size == n);
    const OracleResult oracle = min_discrepancy_bruteforce(sys);
    REQUIRE(rep.achieved_disc == oracle.min_disc);
  }
}

TEST_CASE("full_color: mid-size instance, phases halve the active set") {
  const SetSystem sys = generate_random(32, 32, 0.5, 909);
  FullColoringParams params;
  params.seed = 4;
  const FullColoringReport rep = full_color(sys, params);
  REQUIRE(rep.success);
  REQUIRE(rep.achieved_disc == discrepancy(sys, rep.coloring));
  REQUIRE(rep.iterations >= 1);
  for (const auto& ph : rep.phases) {
    REQUIRE(2 * ph.frozen_vars >= ph.active_before);
    REQUIRE(ph.active_after <= ph.active_before / 2);
  }
  REQUIRE(rep.brute_tail_size <= kBruteTailFloor);
  for (int v : rep.coloring.values) REQUIRE((v == 1 || v == -1));

  // deterministic under the same seed
  const FullColoringReport again = full_color(sys, params);
  REQUIRE(again.achieved_disc == rep.achieved_disc);
  REQUIRE(again.coloring.values == rep.coloring.values);

  // a different seed is allowed to differ, the bound scale stays sane
  FullColoringParams other;
  other.seed = 5;
  const FullColoringReport rep2 = full_color(sys, other);
  REQUIRE(rep2.success);
}

TEST_CASE("full_color: fewer sets than points uses padded thresholds") {
  SetSystem sys{12, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}}};
  FullColoringParams params;
  params.seed = 21;
  const FullColoringReport rep = full_color(sys, params);
  REQUIRE(rep.success);
  REQUIRE(rep.achieved_disc <= 12);
  REQUIRE(rep.achieved_disc == discrepancy(sys, rep.coloring));
}

TEST_CASE("full_color: empty collection still colors everything") {
  SetSystem sys{10, {}};
  FullColoringParams params;
  params.seed = 3;
  const FullColoringReport rep = full_color(sys, params);
  REQUIRE(rep.success);
  REQUIRE(rep.achieved_disc == 0);
  REQUIRE(rep.coloring.size() == 10);
}

TEST_CASE("full_color: delta override is respected and validated") {
  const SetSystem sys = generate_random(16, 16, 0.5, 42);
  FullColoringParams params;
  params.seed = 9;
  params.delta_override = 0.06;
  const FullColoringReport rep = full_color(sys, params);
  REQUIRE(rep.delta == 0.06);
  REQUIRE(rep.success);

  params.delta_override = 0.2;
  REQUIRE_THROWS_AS(full_color(sys, params), contract_error);
}

// Minimal library tour: generate a random set system, run one partial
// coloring, then drive the full pipeline and compare against the guarantee
// scale. Build and run:
//
//   cmake --build build --target partial_walk_demo
//   ./build/demos/partial_walk_demo [seed]

#include <cstdlib>
#include <iostream>

#include "disclab/disclab.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  const int n = 32;

  const disclab::SetSystem sys = disclab::generate_random(n, n, 0.5, seed);
  std::cout << "instance: n=" << sys.n << " m=" << sys.m()
            << " max_degree=" << disclab::max_degree(sys) << "\n";

  // One partial-coloring phase by hand.
  std::vector<disclab::SparseVec> vectors;
  for (const auto& set : sys.sets)
    if (!set.empty()) vectors.push_back(disclab::SparseVec::indicator(set));
  disclab::WalkParams wp = disclab::derive_params(
      n, static_cast<int>(vectors.size()),
      disclab::default_thresholds(n, static_cast<int>(vectors.size())), 0.05,
      seed);
  wp.max_restarts = 10;
  disclab::FractionalPoint x0;
  x0.values.assign(n, 0.0);
  const auto partial = disclab::partial_color(vectors, x0, wp);
  std::cout << "partial coloring: success=" << partial.success
            << " frozen=" << partial.frozen_var_count << "/" << n
            << " steps=" << partial.steps_taken
            << " restarts=" << partial.restarts_used << "\n";

  // Full pipeline.
  disclab::FullColoringParams params;
  params.seed = seed;
  const auto report = disclab::full_color(sys, params);
  std::cout << "full coloring: disc=" << report.achieved_disc
            << " phases=" << report.iterations
            << " scale=" << disclab::disc_bound_scale(sys.n, sys.m())
            << "\n";

  const auto bf = disclab::beck_fiala_color(sys);
  std::cout << "beck-fiala: disc=" << bf.achieved_disc << " bound=" << bf.bound
            << "\n";
  return 0;
}

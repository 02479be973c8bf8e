// Densification of a nested chain of convex bodies so that the gap/curvature
// increments along the chain add up to a divergent series.
#pragma once

#include <string>
#include <vector>

#include "ncg/convex.hpp"

namespace ncg {

// Smallest m with (sqrt(6)/pi) * sqrt(gap/kappa) * (1 + 1/2 + ... + 1/m) >= 1.
int harmonic_split_count(double gap, double kappa, int cap = 10000);

// Offset distances 0 < t_1 < ... < t_{m-1} < gap subdividing one nesting gap:
// t_a = gap * (6/pi^2) * sum_{h<=a} 1/h^2.
std::vector<double> harmonic_offsets(double gap, int m);

struct DensifiedChain {
  std::vector<SupportBody> bodies;
  // One entry per consecutive pair: index of the source gap in the input chain.
  std::vector<int> block;
};

// Inserts offsets of each body toward its successor per the harmonic schedule.
// Every input pair must be strictly nested.
DensifiedChain densify_chain(const std::vector<SupportBody>& chain, int cap = 10000);

struct DivergenceRow {
  int k = 0;      // pair index in the densified chain
  int block = 0;  // source gap in the input chain
  double gap = 0;
  double kappa = 0;
  double increment = 0;  // sqrt(gap / kappa)
  double partial = 0;    // running sum of increments
};

std::vector<DivergenceRow> divergence_rows(const DensifiedChain& chain);
// Sum of increments contributed by each source gap.
std::vector<double> block_sums(const DensifiedChain& chain);
std::string divergence_csv(const std::vector<DivergenceRow>& rows);

}  // namespace ncg

#include "ncg/properseq.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ncg {

int harmonic_split_count(double gap, double kappa, int cap) {
  if (!(gap > 0)) throw std::invalid_argument("gap must be positive");
  if (!(kappa > 0)) throw std::invalid_argument("curvature must be positive");
  const double target = M_PI / std::sqrt(6.0) / std::sqrt(gap / kappa);
  double harmonic = 0.0;
  for (int m = 1; m <= cap; ++m) {
    harmonic += 1.0 / m;
    if (harmonic >= target) return m;
  }
  throw std::runtime_error("harmonic split count exceeds cap: gap too thin");
}

std::vector<double> harmonic_offsets(double gap, int m) {
  if (m < 1) throw std::invalid_argument("split count must be positive");
  std::vector<double> out;
  const double scale = gap * 6.0 / (M_PI * M_PI);
  double basel = 0.0;
  for (int a = 1; a <= m - 1; ++a) {
    basel += 1.0 / (double(a) * a);
    out.push_back(scale * basel);
  }
  return out;
}

DensifiedChain densify_chain(const std::vector<SupportBody>& chain, int cap) {
  if (chain.size() < 2) throw std::invalid_argument("need at least two bodies");
  DensifiedChain out;
  for (size_t j = 0; j + 1 < chain.size(); ++j) {
    const double gap = nesting_gap(chain[j], chain[j + 1]);
    if (!(gap > 0)) throw std::invalid_argument("chain is not strictly nested");
    const double kappa = chain[j].max_curvature();
    const int m = harmonic_split_count(gap, kappa, cap);
    out.bodies.push_back(chain[j]);
    out.block.push_back(int(j));
    for (double t : harmonic_offsets(gap, m)) {
      out.bodies.push_back(chain[j].offset(t));
      out.block.push_back(int(j));
    }
  }
  out.bodies.push_back(chain.back());
  return out;
}

std::vector<DivergenceRow> divergence_rows(const DensifiedChain& chain) {
  if (chain.bodies.size() < 2 || chain.block.size() + 1 != chain.bodies.size())
    throw std::invalid_argument("malformed densified chain");
  std::vector<DivergenceRow> rows;
  double partial = 0.0;
  for (size_t k = 0; k + 1 < chain.bodies.size(); ++k) {
    DivergenceRow r;
    r.k = int(k);
    r.block = chain.block[k];
    r.gap = nesting_gap(chain.bodies[k], chain.bodies[k + 1]);
    r.kappa = chain.bodies[k].max_curvature();
    r.increment = std::sqrt(r.gap / r.kappa);
    partial += r.increment;
    r.partial = partial;
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> block_sums(const DensifiedChain& chain) {
  std::vector<double> sums;
  for (const DivergenceRow& r : divergence_rows(chain)) {
    if (r.block >= int(sums.size())) sums.resize(size_t(r.block) + 1, 0.0);
    sums[size_t(r.block)] += r.increment;
  }
  return sums;
}

std::string divergence_csv(const std::vector<DivergenceRow>& rows) {
  std::string out = "k,block,gap,kappa,increment,partial_sum\n";
  char buf[192];
  for (const DivergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.k, r.block,
                  r.gap, r.kappa, r.increment, r.partial);
    out += buf;
  }
  return out;
}

}  // namespace ncg

#include "ncg/properseq.hpp"

#include "doctest.h"

using namespace ncg;

namespace {

SupportBody ball6(double radius) {
  return SupportBody::ball(VecXd::Zero(6), radius);
}

}  // namespace

TEST_CASE("harmonic split count for the unit gap") {
  // gap 1, curvature 1: need 1 + 1/2 + ... + 1/m >= pi/sqrt(6) ~ 1.2825.
  CHECK(harmonic_split_count(1.0, 1.0) == 2);
  // A generous gap needs no subdivision at all.
  CHECK(harmonic_split_count(2.0, 1.0) == 1);
  CHECK_THROWS_AS(harmonic_split_count(1e-9, 1e6, 1000), std::runtime_error);
  CHECK_THROWS_AS(harmonic_split_count(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("harmonic offsets follow the basel schedule") {
  std::vector<double> t = harmonic_offsets(1.0, 3);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == doctest::Approx(6.0 / (M_PI * M_PI)).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(6.0 / (M_PI * M_PI) * 1.25).epsilon(1e-15));
  CHECK(t[1] < 1.0);
  CHECK(harmonic_offsets(1.0, 1).empty());
}

TEST_CASE("densified ball pair inserts one body and keeps nesting") {
  DensifiedChain dc = densify_chain({ball6(1.0), ball6(2.0)});
  REQUIRE(dc.bodies.size() == 3);
  CHECK(dc.block == std::vector<int>{0, 0});
  CHECK(dc.bodies[1].ball_radius() ==
        doctest::Approx(1.0 + 6.0 / (M_PI * M_PI)).epsilon(1e-14));
  for (size_t k = 0; k + 1 < dc.bodies.size(); ++k)
    CHECK(nesting_gap(dc.bodies[k], dc.bodies[k + 1]) > 0);
}

TEST_CASE("every block contributes at least a unit increment sum") {
  std::vector<SupportBody> chain;
  for (int r = 1; r <= 6; ++r) chain.push_back(ball6(double(r)));
  DensifiedChain dc = densify_chain(chain);
  for (double s : block_sums(dc)) CHECK(s >= 1.0);
}

TEST_CASE("partial sums diverge along a growing exhaustion") {
  std::vector<SupportBody> chain;
  for (int r = 1; r <= 12; ++r) chain.push_back(ball6(double(r)));
  DensifiedChain dc = densify_chain(chain);
  std::vector<DivergenceRow> rows = divergence_rows(dc);
  REQUIRE(!rows.empty());
  CHECK(rows.back().partial > 10.0);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].partial > rows[i - 1].partial);
}

TEST_CASE("divergence csv is stable across reruns") {
  DensifiedChain dc = densify_chain({ball6(1.0), ball6(2.0), ball6(3.0)});
  const std::string a = divergence_csv(divergence_rows(dc));
  const std::string b = divergence_csv(divergence_rows(dc));
  CHECK(a == b);
  CHECK(a.rfind("k,block,gap,kappa,increment,partial_sum\n", 0) == 0);
}

TEST_CASE("densify rejects chains that are not strictly nested") {
  CHECK_THROWS_AS(densify_chain({ball6(2.0), ball6(1.0)}), std::invalid_argument);
  CHECK_THROWS_AS(densify_chain({ball6(1.0)}), std::invalid_argument);
}

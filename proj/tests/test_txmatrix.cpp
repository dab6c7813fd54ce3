#include <doctest.h>

#include "helpers.hpp"
#include "tbdd/txmatrix.hpp"

using namespace tbdd;
namespace tt = tbdd::testing;

namespace {

TxGenConfig gen_cfg(double mean, double sd, double boost) {
  TxGenConfig g;
  g.base_mean = mean;
  g.base_sd = sd;
  g.collusion_boost = boost;
  return g;
}

}  // namespace

TEST_CASE("degenerate normal gives a constant matrix") {
  auto net_cfg = tt::net(6, 1, 4);
  DeterministicRng rng(1, "txgen");
  auto phi = generate_tx_matrix(net_cfg, tt::honest_profiles(6), gen_cfg(5, 0, 0), rng);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(phi.at(i, j) == (i == j ? 0 : 5));
}

TEST_CASE("same seed and parameters reproduce the matrix") {
  auto net_cfg = tt::net(10, 2);
  auto profiles = tt::leading_dishonest(10, 3);
  DeterministicRng r1(7, "txgen");
  DeterministicRng r2(7, "txgen");
  auto a = generate_tx_matrix(net_cfg, profiles, gen_cfg(10, 3, 10), r1);
  auto b = generate_tx_matrix(net_cfg, profiles, gen_cfg(10, 3, 10), r2);
  CHECK(a == b);
}

TEST_CASE("collusion boost lifts dishonest-pair means over 1000 seeds") {
  auto net_cfg = tt::net(6, 1, 4);
  auto profiles = tt::leading_dishonest(6, 2);  // nodes 0 and 1 collude
  double dishonest_sum = 0.0, honest_sum = 0.0;
  long honest_pairs = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    DeterministicRng rng(seed, "txgen");
    auto phi = generate_tx_matrix(net_cfg, profiles, gen_cfg(10, 3, 10), rng);
    dishonest_sum += static_cast<double>(phi.at(0, 1));
    for (int i = 2; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        honest_sum += static_cast<double>(phi.at(i, j));
        ++honest_pairs;
      }
  }
  CHECK(dishonest_sum / 1000.0 > honest_sum / static_cast<double>(honest_pairs));
}

TEST_CASE("matrix entries are symmetric, non-negative, zero diagonal") {
  auto net_cfg = tt::net(12, 2);
  DeterministicRng rng(3, "txgen");
  auto phi = generate_tx_matrix(net_cfg, tt::leading_dishonest(12, 4), gen_cfg(8, 4, 6), rng);
  for (int i = 0; i < 12; ++i) {
    CHECK(phi.at(i, i) == 0);
    for (int j = 0; j < 12; ++j) {
      CHECK(phi.at(i, j) == phi.at(j, i));
      CHECK(phi.at(i, j) >= 0);
    }
  }
}

TEST_CASE("hand-enumerated four-node stats") {
  TransactionMatrix phi(4);
  phi.set(0, 1, 5);
  phi.set(2, 3, 4);
  phi.set(0, 2, 3);
  phi.set(1, 3, 2);
  auto a = tt::valid({0, 0, 1, 1}, tt::net(4, 2, 2));
  auto stats = cst_stats(phi, a);
  REQUIRE(stats.ok());
  CHECK(stats.value().phi_in == 9);
  CHECK(stats.value().phi_cr == 5);
  CHECK(stats.value().cst_ratio == doctest::Approx(5.0 / 14.0));
}

TEST_CASE("block-diagonal matrix has zero CST ratio") {
  TransactionMatrix phi(8);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      phi.set(i, j, 3);
      phi.set(i + 4, j + 4, 2);
    }
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  auto stats = cst_stats(phi, a);
  REQUIRE(stats.ok());
  CHECK(stats.value().phi_cr == 0);
  CHECK(stats.value().cst_ratio == 0.0);
}

TEST_CASE("all-cross matrix has ratio one; empty matrix ratio zero") {
  TransactionMatrix cross(8);
  for (int i = 0; i < 4; ++i)
    for (int j = 4; j < 8; ++j) cross.set(i, j, 1);
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  auto stats = cst_stats(cross, a);
  REQUIRE(stats.ok());
  CHECK(stats.value().cst_ratio == 1.0);

  TransactionMatrix empty(8);
  auto zero = cst_stats(empty, a);
  REQUIRE(zero.ok());
  CHECK(zero.value().cst_ratio == 0.0);
}

TEST_CASE("cst_stats matches the brute-force pair count on random instances") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    DeterministicRng rng(seed, "prop");
    int n = 4 + static_cast<int>(rng.uniform_below(9));  // 4..12
    int d = 2 + static_cast<int>(rng.uniform_below(2));  // 2..3
    if (n < 2 * d) d = 2;
    auto net_cfg = tt::net(n, d, 1);
    DeterministicRng gen_rng(seed, "mat");
    auto phi = generate_tx_matrix(net_cfg, tt::leading_dishonest(n, n / 3),
                                  gen_cfg(6, 3, 5), gen_rng);
    // Random assignment with every shard non-empty.
    std::vector<int> shard_of(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      shard_of[static_cast<size_t>(i)] =
          i < d ? i : static_cast<int>(rng.uniform_below(static_cast<uint64_t>(d)));
    auto a = tt::valid(shard_of, net_cfg);
    auto stats = cst_stats(phi, a);
    REQUIRE(stats.ok());
    CHECK(stats.value().phi_cr == tt::brute_force_cst(phi, a));
    CHECK(stats.value().phi_in == tt::brute_force_ist(phi, a));
    CHECK(stats.value().phi_in + stats.value().phi_cr == phi.total_undirected());
  }
}

TEST_CASE("stats are invariant under shard relabeling") {
  auto net_cfg = tt::net(9, 3, 3);
  DeterministicRng rng(21, "mat");
  auto phi = generate_tx_matrix(net_cfg, tt::honest_profiles(9), gen_cfg(7, 2, 0), rng);
  auto a = tt::valid({0, 0, 0, 1, 1, 1, 2, 2, 2}, net_cfg);
  auto b = tt::valid({2, 2, 2, 0, 0, 0, 1, 1, 1}, net_cfg);
  auto sa = cst_stats(phi, a);
  auto sb = cst_stats(phi, b);
  REQUIRE(sa.ok());
  REQUIRE(sb.ok());
  CHECK(sa.value().phi_in == sb.value().phi_in);
  CHECK(sa.value().phi_cr == sb.value().phi_cr);
}

TEST_CASE("dimension mismatch is rejected") {
  TransactionMatrix phi(4);
  auto a = tt::valid({0, 0, 0, 1, 1, 1}, tt::net(6, 2, 3));
  CHECK_FALSE(cst_stats(phi, a).ok());
  CHECK(cst_stats(phi, a).error().code == Errc::dimension_mismatch);
}

TEST_CASE("csv round trip") {
  auto net_cfg = tt::net(7, 1, 4);
  DeterministicRng rng(5, "mat");
  auto phi = generate_tx_matrix(net_cfg, tt::leading_dishonest(7, 2), gen_cfg(9, 2, 4), rng);
  auto back = tx_matrix_from_csv(tx_matrix_to_csv(phi));
  REQUIRE(back.ok());
  CHECK(back.value() == phi);
}

TEST_CASE("csv import rejects asymmetry and non-zero diagonals") {
  CHECK_FALSE(tx_matrix_from_csv("0,1\n2,0\n").ok());
  CHECK_FALSE(tx_matrix_from_csv("1,2\n2,0\n").ok());
  CHECK_FALSE(tx_matrix_from_csv("0,2,9\n2,0\n").ok());
}

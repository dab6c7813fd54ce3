#include <doctest.h>

#include "helpers.hpp"
#include "tbdd/risk.hpp"

using namespace tbdd;
namespace tt = tbdd::testing;

namespace {

GlobalTrustTable gtt_of(std::vector<double> g) {
  GlobalTrustTable t;
  t.g = std::move(g);
  return t;
}

TrustConfig trust_with_rho(double rho_t) {
  TrustConfig cfg;
  cfg.rho_t = rho_t;
  return cfg;
}

}  // namespace

TEST_CASE("intra-shard tolerance arithmetic") {
  CHECK(f_intra(8) == 2);
  CHECK(f_intra(4) == 1);
  CHECK(f_intra(1) == 0);
}

TEST_CASE("network tolerance arithmetic") {
  CHECK(f_total(16, 2) == 4);
  CHECK(f_total(12, 3) == 3);
  CHECK(f_total(4, 1) == 1);
}

TEST_CASE("f_total never exceeds the per-shard bound, equality on even splits") {
  for (int d = 1; d <= 4; ++d)
    for (int n = d * 4; n <= 40; ++n) {
      CHECK(f_total(n, d) <= d * f_intra(n / d));
      if (n % d == 0) CHECK(f_total(n, d) == d * f_intra(n / d));
    }
}

TEST_CASE("no risk signals means no trigger") {
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  TxStats stats;  // zero transactions, ratio 0
  auto report = evaluate_risk(gtt_of(std::vector<double>(8, 1.0)), a, stats,
                              trust_with_rho(0.67), RiskConfig{});
  CHECK(report.trigger == Trigger::not_trigger);
  CHECK(report.reason == TriggerReason::none);
  for (const auto& h : report.high_risk) CHECK(h.empty());
  CHECK(report.corrupted_count == 0);
  CHECK(report.grand_mean == doctest::Approx(1.0));
}

TEST_CASE("three low-trust nodes corrupt a shard of eight") {
  std::vector<int> shard_of(16, 0);
  for (int i = 8; i < 16; ++i) shard_of[static_cast<size_t>(i)] = 1;
  auto a = tt::valid(shard_of, tt::net(16, 2));
  std::vector<double> g(16, 0.9);
  g[1] = g[3] = g[5] = 0.2;  // three in shard 0: above f_intra(8) = 2
  TxStats stats;
  auto report = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});
  CHECK(report.trigger == Trigger::trigger);
  CHECK(report.reason == TriggerReason::shard_corrupted);
  CHECK(report.corrupted_shard == 0);
  CHECK(report.high_risk[0].size() == 3);
  CHECK(report.corrupted[0]);
  CHECK_FALSE(report.corrupted[1]);
}

TEST_CASE("cst ratio above threshold triggers when no shard is corrupted") {
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  TxStats stats;
  stats.phi_in = 5;
  stats.phi_cr = 5;
  stats.cst_ratio = 0.5;
  RiskConfig risk;
  risk.rho_cr = 0.4;
  auto report = evaluate_risk(gtt_of(std::vector<double>(8, 1.0)), a, stats,
                              trust_with_rho(0.67), risk);
  CHECK(report.trigger == Trigger::trigger);
  CHECK(report.reason == TriggerReason::cst_exceeded);
  CHECK(report.corrupted_count == 0);
}

TEST_CASE("threshold comparison is strict") {
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  std::vector<double> g(8, 0.9);
  g[0] = 0.67;  // exactly rho_t: not high-risk under strict less-than
  TxStats stats;
  auto report = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});
  CHECK(report.high_risk[0].empty());

  stats.cst_ratio = 0.4;  // exactly rho_cr: not a trigger
  auto at_threshold = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});
  CHECK(at_threshold.trigger == Trigger::not_trigger);
}

TEST_CASE("report stays fully populated after an early trigger") {
  std::vector<int> shard_of(12, 0);
  for (int i = 4; i < 8; ++i) shard_of[static_cast<size_t>(i)] = 1;
  for (int i = 8; i < 12; ++i) shard_of[static_cast<size_t>(i)] = 2;
  auto a = tt::valid(shard_of, tt::net(12, 3));
  std::vector<double> g(12, 0.1);  // everything high-risk, every shard corrupted
  TxStats stats;
  stats.cst_ratio = 0.9;
  auto report = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});
  CHECK(report.trigger == Trigger::trigger);
  CHECK(report.reason == TriggerReason::shard_corrupted);
  CHECK(report.corrupted_shard == 0);
  CHECK(report.corrupted_count == 3);
  for (int x = 0; x < 3; ++x) {
    CHECK(report.corrupted[static_cast<size_t>(x)]);
    CHECK(report.high_risk[static_cast<size_t>(x)].size() == 4);
    CHECK(report.shard_means[static_cast<size_t>(x)] == doctest::Approx(0.1));
  }
}

TEST_CASE("lowering trust never shrinks the high-risk sets") {
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  DeterministicRng rng(5, "risk");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> g(8);
    for (auto& v : g) v = rng.uniform01();
    TxStats stats;
    stats.cst_ratio = rng.uniform01();
    auto base = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});

    auto lowered = g;
    int victim = static_cast<int>(rng.uniform_below(8));
    lowered[static_cast<size_t>(victim)] = 0.0;
    auto after = evaluate_risk(gtt_of(lowered), a, stats, trust_with_rho(0.67), RiskConfig{});
    for (size_t x = 0; x < 2; ++x)
      CHECK(after.high_risk[x].size() >= base.high_risk[x].size());

    // Raising the CST ratio never flips a trigger off.
    auto hotter = stats;
    hotter.cst_ratio = std::min(1.0, stats.cst_ratio + 0.3);
    auto retrig = evaluate_risk(gtt_of(g), a, hotter, trust_with_rho(0.67), RiskConfig{});
    if (base.trigger == Trigger::trigger) CHECK(retrig.trigger == Trigger::trigger);
  }
}

TEST_CASE("not-trigger certifies both conditions") {
  auto a = tt::valid({0, 0, 0, 0, 1, 1, 1, 1}, tt::net(8, 2));
  DeterministicRng rng(6, "risk");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> g(8);
    for (auto& v : g) v = rng.uniform01();
    TxStats stats;
    stats.cst_ratio = rng.uniform01();
    auto report = evaluate_risk(gtt_of(g), a, stats, trust_with_rho(0.67), RiskConfig{});
    if (report.trigger == Trigger::not_trigger) {
      CHECK(stats.cst_ratio <= 0.4);
      for (size_t x = 0; x < 2; ++x)
        CHECK(static_cast<int>(report.high_risk[x].size()) <= f_intra(4));
    }
  }
}

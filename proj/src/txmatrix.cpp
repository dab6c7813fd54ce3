#include "tbdd/txmatrix.hpp"

#include <cmath>
#include <sstream>

namespace tbdd {

void TransactionMatrix::set(int i, int j, int64_t v) {
  if (i == j) return;
  phi_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)] = v;
  phi_[static_cast<size_t>(j) * static_cast<size_t>(n_) + static_cast<size_t>(i)] = v;
}

int64_t TransactionMatrix::total_undirected() const {
  int64_t sum = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) sum += at(i, j);
  return sum;
}

namespace {

int64_t round_nonneg(double x) {
  if (x <= 0.0) return 0;
  return static_cast<int64_t>(std::floor(x + 0.5));
}

}  // namespace

TransactionMatrix generate_tx_matrix(const NetworkConfig& cfg,
                                     const std::vector<NodeProfile>& profiles,
                                     const TxGenConfig& gen, DeterministicRng& rng) {
  TransactionMatrix phi(cfg.n_total);
  for (int i = 0; i < cfg.n_total; ++i) {
    for (int j = i + 1; j < cfg.n_total; ++j) {
      double base = rng.normal(gen.base_mean, gen.base_sd);
      int64_t count = round_nonneg(base);
      bool both_dishonest =
          profiles[static_cast<size_t>(i)].honesty == Honesty::dishonest &&
          profiles[static_cast<size_t>(j)].honesty == Honesty::dishonest;
      if (both_dishonest && gen.collusion_boost > 0.0) {
        double noise = std::fabs(rng.normal(gen.collusion_boost, gen.collusion_boost / 4.0));
        count += round_nonneg(noise);
      }
      phi.set(i, j, count);
    }
  }
  return phi;
}

Result<TxStats> cst_stats(const TransactionMatrix& phi, const ValidatedAssignment& a) {
  if (phi.n() != a.n())
    return make_error(Errc::dimension_mismatch,
                      "matrix is " + std::to_string(phi.n()) + "x" + std::to_string(phi.n()) +
                          " but assignment has " + std::to_string(a.n()) + " nodes",
                      phi.n(), a.n());

  // Directed double sums, halved afterwards: phi_cr = (sum_all - sum_intra)/2.
  int64_t sum_all = 0;
  for (int i = 0; i < phi.n(); ++i)
    for (int j = 0; j < phi.n(); ++j) sum_all += phi.at(i, j);

  int64_t sum_intra = 0;
  for (const auto& shard : a.members())
    for (int i : shard)
      for (int k : shard) sum_intra += phi.at(i, k);

  TxStats stats;
  stats.phi_in = sum_intra / 2;
  stats.phi_cr = (sum_all - sum_intra) / 2;
  int64_t denom = stats.phi_in + stats.phi_cr;
  stats.cst_ratio =
      denom > 0 ? static_cast<double>(stats.phi_cr) / static_cast<double>(denom) : 0.0;
  return stats;
}

Result<ShardTxProfile> shard_tx_profile(const TransactionMatrix& phi,
                                        const ValidatedAssignment& a) {
  if (phi.n() != a.n())
    return make_error(Errc::dimension_mismatch, "matrix/assignment dimension mismatch",
                      phi.n(), a.n());
  ShardTxProfile prof;
  auto d = static_cast<size_t>(a.d());
  prof.ist.assign(d, 0);
  prof.cst.assign(d, std::vector<int64_t>(d, 0));
  for (int i = 0; i < phi.n(); ++i) {
    for (int j = i + 1; j < phi.n(); ++j) {
      int64_t w = phi.at(i, j);
      if (w == 0) continue;
      auto si = static_cast<size_t>(a.shard_of_node(i));
      auto sj = static_cast<size_t>(a.shard_of_node(j));
      if (si == sj) {
        prof.ist[si] += w;
      } else {
        prof.cst[si][sj] += w;
        prof.cst[sj][si] += w;
      }
    }
  }
  return prof;
}

std::string tx_matrix_to_csv(const TransactionMatrix& phi) {
  std::ostringstream out;
  for (int i = 0; i < phi.n(); ++i) {
    for (int j = 0; j < phi.n(); ++j) {
      if (j) out << ',';
      out << phi.at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

Result<TransactionMatrix> tx_matrix_from_csv(const std::string& csv) {
  std::vector<std::vector<int64_t>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<int64_t> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stoll(cell));
      } catch (...) {
        return make_error(Errc::io_error, "bad cell in matrix csv: '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  auto n = static_cast<int>(rows.size());
  TransactionMatrix phi(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != n)
      return make_error(Errc::dimension_mismatch, "matrix csv is not square", i,
                        static_cast<long>(rows[static_cast<size_t>(i)].size()));
    for (int j = 0; j < n; ++j) {
      int64_t v = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (v < 0) return make_error(Errc::io_error, "negative transaction count", i, j);
      if (i < j) {
        if (v != rows[static_cast<size_t>(j)][static_cast<size_t>(i)])
          return make_error(Errc::io_error, "matrix csv is not symmetric", i, j);
        phi.set(i, j, v);
      }
      if (i == j && v != 0)
        return make_error(Errc::io_error, "matrix csv has non-zero diagonal", i, j);
    }
  }
  return phi;
}

}  // namespace tbdd

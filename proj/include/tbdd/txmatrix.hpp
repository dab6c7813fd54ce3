#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbdd/assignment.hpp"
#include "tbdd/common.hpp"
#include "tbdd/config.hpp"
#include "tbdd/rng.hpp"

namespace tbdd {

// Symmetric N x N matrix of non-negative transaction counts, zero diagonal.
class TransactionMatrix {
 public:
  TransactionMatrix() = default;
  explicit TransactionMatrix(int n) : n_(n), phi_(static_cast<size_t>(n) * n, 0) {}

  int n() const { return n_; }
  int64_t at(int i, int j) const {
    return phi_[static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j)];
  }
  // Sets both (i,j) and (j,i); ignores the diagonal.
  void set(int i, int j, int64_t v);

  int64_t total_undirected() const;

  bool operator==(const TransactionMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<int64_t> phi_;
};

struct TxStats {
  int64_t phi_in = 0;    // IST count
  int64_t phi_cr = 0;    // CST count
  double cst_ratio = 0;  // phi_cr / (phi_cr + phi_in), 0 when both are zero
};

// Per-shard view used by the throughput model: IST per shard and CST totals
// between shard pairs.
struct ShardTxProfile {
  std::vector<int64_t> ist;                      // [shard]
  std::vector<std::vector<int64_t>> cst;         // [shard][shard], symmetric, 0 diagonal
};

// Upper-triangle draws from normal(base_mean, base_sd), truncated at zero and
// rounded half-away-from-zero; dishonest pairs get an extra
// |normal(boost, boost/4)| on top. Symmetrized.
TransactionMatrix generate_tx_matrix(const NetworkConfig& cfg,
                                     const std::vector<NodeProfile>& profiles,
                                     const TxGenConfig& gen, DeterministicRng& rng);

Result<TxStats> cst_stats(const TransactionMatrix& phi, const ValidatedAssignment& a);

Result<ShardTxProfile> shard_tx_profile(const TransactionMatrix& phi,
                                        const ValidatedAssignment& a);

// CSV round trip: n rows of n comma-separated integers.
std::string tx_matrix_to_csv(const TransactionMatrix& phi);
Result<TransactionMatrix> tx_matrix_from_csv(const std::string& csv);

}  // namespace tbdd

#pragma once

#include <span>
#include <vector>

#include "tbdd/rng.hpp"

namespace tbdd {

// Dense feed-forward network: tanh on hidden layers, identity output.
// Parameters live in one flat vector (per layer: row-major weight matrix,
// then biases) so optimizers and serialization can treat them uniformly.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  void init_xavier(DeterministicRng& rng);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return sizes_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Post-activation values per layer; activations[0] is the input copy.
  struct Cache {
    std::vector<std::vector<double>> activations;
  };

  std::vector<double> forward(std::span<const double> x) const;
  std::vector<double> forward(std::span<const double> x, Cache& cache) const;

  // Accumulates d(output . upstream)/d(params) into `grad` (same layout as
  // params; caller zero-initializes or accumulates across samples).
  void backward(const Cache& cache, std::span<const double> upstream,
                std::vector<double>& grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<double> params_;
  std::vector<size_t> weight_offsets_;  // per layer
  std::vector<size_t> bias_offsets_;
};

// Plain SGD with optional momentum and global gradient-norm clipping.
class SgdOptimizer {
 public:
  SgdOptimizer(double learning_rate, double momentum = 0.0, double clip_norm = 5.0)
      : lr_(learning_rate), momentum_(momentum), clip_norm_(clip_norm) {}

  void step(std::vector<double>& params, std::vector<double>& grad);

 private:
  double lr_;
  double momentum_;
  double clip_norm_;
  std::vector<double> velocity_;
};

}  // namespace tbdd

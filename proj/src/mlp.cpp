#include "tbdd/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace tbdd {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("mlp needs at least two layers");
  size_t offset = 0;
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    auto in = static_cast<size_t>(sizes_[l]);
    auto out = static_cast<size_t>(sizes_[l + 1]);
    weight_offsets_.push_back(offset);
    offset += in * out;
    bias_offsets_.push_back(offset);
    offset += out;
  }
  params_.assign(offset, 0.0);
}

void Mlp::init_xavier(DeterministicRng& rng) {
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    auto in = static_cast<size_t>(sizes_[l]);
    auto out = static_cast<size_t>(sizes_[l + 1]);
    double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    double* w = params_.data() + weight_offsets_[l];
    for (size_t k = 0; k < in * out; ++k) w[k] = (2.0 * rng.uniform01() - 1.0) * limit;
    double* b = params_.data() + bias_offsets_[l];
    for (size_t k = 0; k < out; ++k) b[k] = 0.0;
  }
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Cache scratch;
  return forward(x, scratch);
}

std::vector<double> Mlp::forward(std::span<const double> x, Cache& cache) const {
  if (static_cast<int>(x.size()) != sizes_.front())
    throw std::invalid_argument("mlp forward: input size mismatch");
  cache.activations.assign(sizes_.size(), {});
  cache.activations[0].assign(x.begin(), x.end());
  for (size_t l = 0; l + 1 < sizes_.size(); ++l) {
    auto in = static_cast<size_t>(sizes_[l]);
    auto out = static_cast<size_t>(sizes_[l + 1]);
    const double* w = params_.data() + weight_offsets_[l];
    const double* b = params_.data() + bias_offsets_[l];
    const auto& prev = cache.activations[l];
    auto& next = cache.activations[l + 1];
    next.assign(out, 0.0);
    bool hidden = l + 2 < sizes_.size();
    for (size_t o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + o * in;
      for (size_t k = 0; k < in; ++k) acc += row[k] * prev[k];
      next[o] = hidden ? std::tanh(acc) : acc;
    }
  }
  return cache.activations.back();
}

void Mlp::backward(const Cache& cache, std::span<const double> upstream,
                   std::vector<double>& grad) const {
  if (static_cast<int>(upstream.size()) != sizes_.back())
    throw std::invalid_argument("mlp backward: upstream size mismatch");
  if (grad.size() != params_.size()) throw std::invalid_argument("mlp backward: grad layout");

  std::vector<double> delta(upstream.begin(), upstream.end());
  for (size_t l = sizes_.size() - 1; l-- > 0;) {
    auto in = static_cast<size_t>(sizes_[l]);
    auto out = static_cast<size_t>(sizes_[l + 1]);
    const double* w = params_.data() + weight_offsets_[l];
    double* gw = grad.data() + weight_offsets_[l];
    double* gb = grad.data() + bias_offsets_[l];
    const auto& prev = cache.activations[l];

    for (size_t o = 0; o < out; ++o) {
      gb[o] += delta[o];
      double* grow = gw + o * in;
      for (size_t k = 0; k < in; ++k) grow[k] += delta[o] * prev[k];
    }
    if (l == 0) break;
    std::vector<double> next_delta(in, 0.0);
    for (size_t o = 0; o < out; ++o) {
      const double* row = w + o * in;
      for (size_t k = 0; k < in; ++k) next_delta[k] += row[k] * delta[o];
    }
    // prev is a tanh layer output: d tanh = 1 - a^2.
    for (size_t k = 0; k < in; ++k) next_delta[k] *= 1.0 - prev[k] * prev[k];
    delta = std::move(next_delta);
  }
}

void SgdOptimizer::step(std::vector<double>& params, std::vector<double>& grad) {
  if (velocity_.size() != params.size()) velocity_.assign(params.size(), 0.0);
  if (clip_norm_ > 0.0) {
    double sq = 0.0;
    for (double g : grad) sq += g * g;
    double norm = std::sqrt(sq);
    if (norm > clip_norm_) {
      double scale = clip_norm_ / norm;
      for (double& g : grad) g *= scale;
    }
  }
  for (size_t k = 0; k < params.size(); ++k) {
    velocity_[k] = momentum_ * velocity_[k] + grad[k];
    params[k] -= lr_ * velocity_[k];
  }
}

}  // namespace tbdd

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace knapzero {

// Fully connected policy/value network: input 4n -> hidden N (ReLU) ->
// hidden N (ReLU) -> {policy logits over n items, scalar value}.
// Policy uses a softmax over legal items only; value uses a sigmoid.
struct MlpParameters {
  int n = 0;       // item count: policy width n, input width 4n
  int hidden = 0;  // neurons per hidden layer

  std::vector<double> w1, b1;  // hidden x 4n, hidden
  std::vector<double> w2, b2;  // hidden x hidden, hidden
  std::vector<double> wp, bp;  // n x hidden, n
  std::vector<double> wv;      // hidden
  double bv = 0.0;

  std::size_t param_count() const;
  // All parameter tensors in a fixed order; shared by the optimizer, the
  // checkpoint codec and the finite-difference tests.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
};

using MlpGradient = MlpParameters;

struct NetOutput {
  std::vector<double> policy;  // length n; zero on illegal items
  double value = 0.5;
};

struct TrainingSample {
  std::vector<double> encoded_state;   // 4n
  std::vector<double> target_policy;   // n, supported on legal moves
  double target_outcome = 0.5;         // z in {0, 0.5, 1}
  std::vector<std::uint8_t> legal_mask;  // n
};

// He-scaled normal init for the ReLU layers, small uniform for the heads.
// Deterministic per seed.
MlpParameters init_network(int n, int hidden, std::uint64_t seed);

// Zero-filled gradient accumulator of the same shape.
MlpGradient zeros_like(const MlpParameters& params);

NetOutput forward(const MlpParameters& params, std::span<const double> input,
                  std::span<const std::uint8_t> legal_mask);

// l = (z - v)^2 - sum_i pi_i log p_i, with 0*log 0 := 0 and p clamped below
// at 1e-12 inside the log.
double loss(const NetOutput& out, const TrainingSample& sample);

// Exact analytic gradient of the mean batch loss. Also reports that loss.
double gradient(const MlpParameters& params, std::span<const TrainingSample> batch,
                MlpGradient& grad);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // decoupled; off by default
};

class AdamState {
 public:
  AdamState(const MlpParameters& params, AdamConfig cfg);
  void step(MlpParameters& params, const MlpGradient& grad);
  const AdamConfig& config() const { return cfg_; }
  long step_count() const { return steps_; }

 private:
  AdamConfig cfg_;
  MlpParameters m_;
  MlpParameters v_;
  long steps_ = 0;
};

}  // namespace knapzero

#include "knapzero/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "knapzero/rng.hpp"

namespace knapzero {

namespace {

constexpr double kLogClamp = 1e-12;

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = W x + b with W of shape rows x cols, row-major.
void affine(std::span<const double> w, std::span<const double> b, std::span<const double> x,
            std::span<double> y) {
  const size_t rows = b.size();
  const size_t cols = x.size();
  for (size_t r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w.data() + r * cols;
    for (size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

struct ForwardTrace {
  std::vector<double> h1, h2;          // post-ReLU activations
  std::vector<double> logits;          // raw policy logits
  std::vector<double> policy;          // masked softmax
  double value_pre = 0.0;
  double value = 0.5;
};

void run_forward(const MlpParameters& p, std::span<const double> input,
                 std::span<const std::uint8_t> mask, ForwardTrace& t) {
  if (static_cast<int>(input.size()) != 4 * p.n) {
    throw std::invalid_argument("forward: input size mismatch");
  }
  if (static_cast<int>(mask.size()) != p.n) {
    throw std::invalid_argument("forward: mask size mismatch");
  }
  bool any_legal = false;
  for (auto b : mask) any_legal |= (b != 0);
  if (!any_legal) throw std::invalid_argument("forward: all moves masked");

  t.h1.assign(p.hidden, 0.0);
  t.h2.assign(p.hidden, 0.0);
  t.logits.assign(p.n, 0.0);
  t.policy.assign(p.n, 0.0);

  affine(p.w1, p.b1, input, t.h1);
  for (auto& a : t.h1) a = std::max(0.0, a);
  affine(p.w2, p.b2, t.h1, t.h2);
  for (auto& a : t.h2) a = std::max(0.0, a);
  affine(p.wp, p.bp, t.h2, t.logits);

  // Masked softmax: illegal logits are excluded before normalization.
  double max_logit = -1e300;
  for (int i = 0; i < p.n; ++i) {
    if (mask[i] && t.logits[i] > max_logit) max_logit = t.logits[i];
  }
  double denom = 0.0;
  for (int i = 0; i < p.n; ++i) {
    if (mask[i]) denom += std::exp(t.logits[i] - max_logit);
  }
  for (int i = 0; i < p.n; ++i) {
    t.policy[i] = mask[i] ? std::exp(t.logits[i] - max_logit) / denom : 0.0;
  }

  double acc = p.bv;
  for (int h = 0; h < p.hidden; ++h) acc += p.wv[h] * t.h2[h];
  t.value_pre = acc;
  t.value = sigmoid(acc);
}

}  // namespace

std::size_t MlpParameters::param_count() const {
  const size_t in = 4 * static_cast<size_t>(n);
  const size_t h = static_cast<size_t>(hidden);
  return h * in + h + h * h + h + static_cast<size_t>(n) * h + static_cast<size_t>(n) + h + 1;
}

std::vector<std::span<double>> MlpParameters::tensors() {
  return {std::span<double>(w1), std::span<double>(b1), std::span<double>(w2),
          std::span<double>(b2), std::span<double>(wp), std::span<double>(bp),
          std::span<double>(wv), std::span<double>(&bv, 1)};
}

std::vector<std::span<const double>> MlpParameters::tensors() const {
  return {std::span<const double>(w1), std::span<const double>(b1),
          std::span<const double>(w2), std::span<const double>(b2),
          std::span<const double>(wp), std::span<const double>(bp),
          std::span<const double>(wv), std::span<const double>(&bv, 1)};
}

MlpParameters init_network(int n, int hidden, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("init_network: n must be >= 1");
  if (hidden < 1) throw std::invalid_argument("init_network: hidden width must be >= 1");

  MlpParameters p;
  p.n = n;
  p.hidden = hidden;
  const size_t in = 4 * static_cast<size_t>(n);
  const size_t h = static_cast<size_t>(hidden);
  p.w1.resize(h * in);
  p.b1.assign(h, 0.0);
  p.w2.resize(h * h);
  p.b2.assign(h, 0.0);
  p.wp.resize(static_cast<size_t>(n) * h);
  p.bp.assign(n, 0.0);
  p.wv.resize(h);

  Xoshiro256 rng(derive_seed(seed, {kInitStream}));
  const double s1 = std::sqrt(2.0 / static_cast<double>(in));
  for (auto& w : p.w1) w = rng.normal() * s1;
  const double s2 = std::sqrt(2.0 / static_cast<double>(h));
  for (auto& w : p.w2) w = rng.normal() * s2;
  // Small uniform head weights keep the initial policy near uniform and the
  // initial value near 0.5.
  const double head = 0.01;
  for (auto& w : p.wp) w = rng.uniform(-head, head);
  for (auto& w : p.wv) w = rng.uniform(-head, head);
  return p;
}

MlpGradient zeros_like(const MlpParameters& params) {
  MlpGradient g = params;
  for (auto span : g.tensors()) {
    std::fill(span.begin(), span.end(), 0.0);
  }
  return g;
}

NetOutput forward(const MlpParameters& params, std::span<const double> input,
                  std::span<const std::uint8_t> legal_mask) {
  ForwardTrace t;
  run_forward(params, input, legal_mask, t);
  NetOutput out;
  out.policy = std::move(t.policy);
  out.value = t.value;
  return out;
}

double loss(const NetOutput& out, const TrainingSample& sample) {
  const double dz = sample.target_outcome - out.value;
  double ce = 0.0;
  for (size_t i = 0; i < sample.target_policy.size(); ++i) {
    const double pi = sample.target_policy[i];
    if (pi == 0.0) continue;
    ce -= pi * std::log(std::max(out.policy[i], kLogClamp));
  }
  return dz * dz + ce;
}

double gradient(const MlpParameters& params, std::span<const TrainingSample> batch,
                MlpGradient& grad) {
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  grad = zeros_like(params);

  const int n = params.n;
  const int h = params.hidden;
  const size_t in = 4 * static_cast<size_t>(n);
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  ForwardTrace t;
  std::vector<double> dlogits(n), dh2(h), dh1(h);
  double total_loss = 0.0;

  for (const TrainingSample& sample : batch) {
    run_forward(params, sample.encoded_state, sample.legal_mask, t);

    NetOutput out;
    out.policy = t.policy;
    out.value = t.value;
    total_loss += loss(out, sample);

    // Policy head. Differentiating -sum_i pi_i log(max(p_i, clamp)) wrt the
    // logits gives p_j * (sum of pi over unclamped terms) - pi_j[unclamped];
    // with no clamping active this is the usual p - pi.
    double active_pi = 0.0;
    for (int i = 0; i < n; ++i) {
      if (sample.target_policy[i] > 0.0 && t.policy[i] > kLogClamp) active_pi += sample.target_policy[i];
    }
    for (int i = 0; i < n; ++i) {
      if (!sample.legal_mask[i]) {
        dlogits[i] = 0.0;
        continue;
      }
      const double pi = (sample.target_policy[i] > 0.0 && t.policy[i] > kLogClamp)
                            ? sample.target_policy[i]
                            : 0.0;
      dlogits[i] = t.policy[i] * active_pi - pi;
    }

    // Value head: d/da (z - sigmoid(a))^2 = 2 (v - z) v (1 - v).
    const double dval = 2.0 * (t.value - sample.target_outcome) * t.value * (1.0 - t.value);

    // Back through the heads into h2.
    for (int j = 0; j < h; ++j) {
      double acc = params.wv[j] * dval;
      for (int i = 0; i < n; ++i) acc += params.wp[static_cast<size_t>(i) * h + j] * dlogits[i];
      dh2[j] = t.h2[j] > 0.0 ? acc : 0.0;
    }
    for (int j = 0; j < h; ++j) {
      double acc = 0.0;
      for (int k = 0; k < h; ++k) acc += params.w2[static_cast<size_t>(k) * h + j] * dh2[k];
      dh1[j] = t.h1[j] > 0.0 ? acc : 0.0;
    }

    // Accumulate parameter gradients (mean over the batch).
    for (int i = 0; i < n; ++i) {
      const double d = dlogits[i] * inv_batch;
      if (d == 0.0) continue;
      double* row = grad.wp.data() + static_cast<size_t>(i) * h;
      for (int j = 0; j < h; ++j) row[j] += d * t.h2[j];
      grad.bp[i] += d;
    }
    {
      const double d = dval * inv_batch;
      for (int j = 0; j < h; ++j) grad.wv[j] += d * t.h2[j];
      grad.bv += d;
    }
    for (int k = 0; k < h; ++k) {
      const double d = dh2[k] * inv_batch;
      if (d == 0.0) continue;
      double* row = grad.w2.data() + static_cast<size_t>(k) * h;
      for (int j = 0; j < h; ++j) row[j] += d * t.h1[j];
      grad.b2[k] += d;
    }
    for (int k = 0; k < h; ++k) {
      const double d = dh1[k] * inv_batch;
      if (d == 0.0) continue;
      double* row = grad.w1.data() + static_cast<size_t>(k) * in;
      for (size_t c = 0; c < in; ++c) row[c] += d * sample.encoded_state[c];
      grad.b1[k] += d;
    }
  }
  return total_loss * inv_batch;
}

AdamState::AdamState(const MlpParameters& params, AdamConfig cfg)
    : cfg_(cfg), m_(zeros_like(params)), v_(zeros_like(params)) {}

void AdamState::step(MlpParameters& params, const MlpGradient& grad) {
  ++steps_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));

  auto pt = params.tensors();
  auto gt = std::as_const(grad).tensors();
  auto mt = m_.tensors();
  auto vt = v_.tensors();
  for (size_t ti = 0; ti < pt.size(); ++ti) {
    if (pt[ti].size() != gt[ti].size()) throw std::invalid_argument("optimize_step: shape mismatch");
    for (size_t i = 0; i < pt[ti].size(); ++i) {
      const double g = gt[ti][i];
      double& m = mt[ti][i];
      double& v = vt[ti][i];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m / bc1;
      const double vhat = v / bc2;
      double& p = pt[ti][i];
      if (cfg_.weight_decay > 0.0) p -= cfg_.learning_rate * cfg_.weight_decay * p;
      p -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
  }
}

}  // namespace knapzero

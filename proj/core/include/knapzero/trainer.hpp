#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "knapzero/checkpoint.hpp"
#include "knapzero/game.hpp"
#include "knapzero/mcts.hpp"
#include "knapzero/net.hpp"
#include "knapzero/rng.hpp"

namespace knapzero {

struct TrainConfig {
  int n = 16;
  int hidden = 64;
  long total_games = 40000;
  int games_per_optimization = 40;
  int eval_interval_games = 4000;
  int eval_games = 200;
  int replicas = 4;
  std::size_t buffer_capacity = 100000;
  int optimize_steps_per_phase = 50;
  int batch_size = 128;
  AdamConfig adam;
  MctsConfig mcts;  // 40 iterations
  std::uint64_t seed = 1;
  int workers = 1;
};

// Throws on invariant violations (divisibility, positive counts).
void validate_config(const TrainConfig& cfg);

struct SchedulePlan {
  long phases = 0;
  long optimization_steps_total = 0;
  std::vector<long> eval_points;  // games_played values at which evaluation runs
};

// The phase/evaluation schedule implied by a config: one optimization phase
// per games_per_optimization games, an evaluation at every multiple of
// eval_interval_games, and a final evaluation if the run would otherwise end
// without one.
SchedulePlan derive_schedule(const TrainConfig& cfg);

// Bounded FIFO of training samples with uniform random batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity, std::uint64_t seed);

  void append(std::vector<TrainingSample> samples);
  std::size_t size() const { return samples_.size(); }
  std::size_t capacity() const { return capacity_; }

  // Uniform sample with replacement; requires a non-empty buffer.
  std::vector<TrainingSample> sample_batch(int batch_size);

 private:
  std::size_t capacity_;
  std::deque<TrainingSample> samples_;
  Xoshiro256 rng_;
};

struct SelfPlayGame {
  GameRecord record;
  std::vector<TrainingSample> samples;
};

// One self-play game on a fresh weakly correlated instance (seeded by
// game_seed). Both seats share the network but own separate search trees.
// Every decision state emits a sample; z is filled in from the final outcome
// from that state's mover's perspective.
SelfPlayGame play_selfplay_game(const MlpParameters& params, const TrainConfig& cfg,
                                std::uint64_t game_seed);

// Plays an even number of evaluation games against the greedy baseline on
// mirrored instance pairs (alternating first mover); returns the mean score.
// The net plays argmax moves with the configured search budget.
double evaluate_vs_greedy(const MlpParameters& params, int games, const TrainConfig& cfg,
                          std::uint64_t eval_seed);

struct PhaseMetrics {
  long phase = 0;
  long games_played = 0;
  double mean_loss = 0.0;
  std::optional<double> eval_win_rate;  // set on evaluation phases
  double wall_time_s = 0.0;
};

struct TrainResult {
  MlpParameters best_params;
  CheckpointMeta best_meta;
  MlpParameters final_params;
  CheckpointMeta final_meta;
  std::vector<PhaseMetrics> metrics;
};

// Optional artifact paths; empty strings are skipped.
struct TrainSinks {
  std::string metrics_csv;
  std::string games_log;
  std::string best_checkpoint;
  std::string latest_checkpoint;  // refreshed at every evaluation point
};

// Runs the full self-play / optimize / evaluate loop. Training always
// continues from the latest parameters; the best evaluation checkpoint is
// retained separately. Never early-stops.
TrainResult training_loop(const TrainConfig& cfg, const TrainSinks& sinks = {});

void write_metrics_csv(const std::string& path, const std::vector<PhaseMetrics>& metrics);

}  // namespace knapzero

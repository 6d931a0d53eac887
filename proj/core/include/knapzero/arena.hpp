#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "knapzero/game.hpp"
#include "knapzero/mcts.hpp"
#include "knapzero/net.hpp"

namespace knapzero {

// Ratio-greedy baseline: the fitting item with the best v/w, which is the
// lowest-index fitting item since instances are ratio-sorted. Pass iff forced.
Move greedy_move(const GameState& st);

inline constexpr int kMinimaxMaxItems = 12;

// Exact solver for small games; memoizes on (ownership, player to move,
// consecutive passes). One solver serves one instance.
class MinimaxSolver {
 public:
  explicit MinimaxSolver(std::shared_ptr<const Instance> inst);

  // Game value in [0,1] for the player to move under optimal play.
  double value(const GameState& st);
  // Value-maximizing take; ties go to the lowest index.
  Move best_move(const GameState& st);

 private:
  std::uint64_t key(const GameState& st) const;
  std::shared_ptr<const Instance> inst_;
  std::unordered_map<std::uint64_t, double> cache_;
};

// Convenience form of the above for one-off queries.
double minimax_value(const GameState& st);

// Exact evaluator for search oracles: uniform priors, exact game value.
class MinimaxEvaluator : public Evaluator {
 public:
  explicit MinimaxEvaluator(std::shared_ptr<const Instance> inst) : solver_(std::move(inst)) {}
  Evaluation evaluate(const GameState& state) override;

 private:
  MinimaxSolver solver_;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual const std::string& label() const = 0;
  // Called once per game before any move; seed drives any agent randomness.
  virtual void begin_game(const GameState& initial, std::uint64_t seed) = 0;
  // st is always a non-terminal decision state.
  virtual Move choose(const GameState& st) = 0;
  // Every applied take, from both seats, in game order.
  virtual void observe(Move m) {}
};

struct AgentSpec {
  enum class Kind { kNet, kGreedy, kRandom, kMinimax };
  Kind kind = Kind::kGreedy;
  std::string label;
  std::string group;            // replica pooling key; empty = own group
  std::string checkpoint_path;  // kNet
  MctsConfig mcts;              // kNet
  MoveSelect move_select = MoveSelect::kArgmax;  // kNet; tournaments play argmax
  std::uint64_t rng_seed = 0;   // kRandom

  static AgentSpec greedy(std::string label = "greedy");
  static AgentSpec random(std::uint64_t seed, std::string label = "random");
  static AgentSpec minimax(std::string label = "minimax");
  static AgentSpec net(std::string checkpoint_path, MctsConfig mcts = {}, std::string label = "");
};

// Instantiates an agent for n-item games. Throws when the spec cannot play n
// (minimax cap, checkpoint dimension mismatch).
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, int n);

// In-memory net agent (no checkpoint file), used by the trainer's evaluation.
std::unique_ptr<Agent> make_net_agent(const MlpParameters& params, MctsConfig mcts,
                                      MoveSelect move_select, std::string label);

// One game; `first` owns seat 0. Returns the full record including passes.
GameRecord play_single_game(Agent& first, Agent& second,
                            std::shared_ptr<const Instance> inst, std::uint64_t game_seed);

struct MatchGameRow {
  std::uint64_t instance_seed = 0;
  int first_mover = 0;  // 0 = agent a moved first
  std::string agent_a, agent_b;
  double score_a = 0.0;
};

struct MatchResult {
  double score_a = 0.0;
  double score_b = 0.0;
  std::vector<MatchGameRow> rows;
  std::vector<GameRecord> records;
};

// Plays `games` games on fresh seeded n-item instances, alternating the first
// mover; consecutive game pairs share an instance with the seats mirrored.
MatchResult play_match(const AgentSpec& a, const AgentSpec& b, int n, int games,
                       std::uint64_t seed, int workers = 1);

struct WinMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> wins;  // score of row agent vs column agent
  std::vector<std::vector<long>> games;

  int index_of(const std::string& label) const;
};

struct RoundRobinResult {
  WinMatrix matrix;
  std::vector<MatchGameRow> log;
};

RoundRobinResult round_robin(const std::vector<AgentSpec>& agents, int n, int games_per_pair,
                             std::uint64_t seed, int workers = 1);

// Merges replica agents into their groups: the pooled cell (A,B) sums wins
// and games over every cross pairing of A's and B's members.
WinMatrix pool_by_group(const WinMatrix& matrix, const std::vector<std::string>& groups);

void write_match_log_csv(const std::string& path, const std::vector<MatchGameRow>& rows);
void write_win_matrix_csv(const std::string& path, const WinMatrix& m);
void write_win_matrix_json(const std::string& path, const WinMatrix& m);

}  // namespace knapzero

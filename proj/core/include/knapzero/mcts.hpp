#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "knapzero/game.hpp"
#include "knapzero/net.hpp"

namespace knapzero {

// Position evaluation from the viewpoint of the player to move: a prior over
// the n items (legal-masked, normalized) and an expected score in [0,1].
struct Evaluation {
  std::vector<double> policy;
  double value = 0.5;
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Evaluation evaluate(const GameState& state) = 0;
};

// Bridges the MLP into the search.
class NetEvaluator : public Evaluator {
 public:
  explicit NetEvaluator(const MlpParameters& params) : params_(&params) {}
  Evaluation evaluate(const GameState& state) override;

 private:
  const MlpParameters* params_;
};

enum class QInit {
  kConstant,  // unvisited children score q_init_value
  kParent,    // unvisited children inherit the parent's mean score
};

struct MctsConfig {
  int iterations = 40;
  double c_puct = 1.5;
  double temperature = 1.0;  // tau in pi_i proportional to N_i^(1/tau)
  QInit q_init = QInit::kConstant;
  double q_init_value = 0.5;
  // Dirichlet root noise, off by default.
  bool root_noise = false;
  double noise_alpha = 0.3;
  double noise_epsilon = 0.25;
};

struct SearchNode {
  explicit SearchNode(GameState s) : state(std::move(s)) {}

  GameState state;
  int visit_count = 0;      // N
  double total_score = 0.0;  // W, from this node's player-to-move viewpoint

  struct Edge {
    int item = 0;
    double prior = 0.0;
    std::unique_ptr<SearchNode> child;
  };
  std::vector<Edge> edges;  // ascending item index; empty until expanded
  bool expanded = false;

  double mean_score() const { return visit_count > 0 ? total_score / visit_count : 0.0; }
};

// U = c * P_a * sqrt(sum_i N_i) / (1 + N_a).
double exploration_term(double c, double prior, int child_visits, int total_child_visits);

// Index into node.edges of the child maximizing Q + U; ties go to the lowest
// item index. Unvisited children use the configured Q initialization.
int select_child(const SearchNode& node, const MctsConfig& cfg);

// Normalized visit counts: pi_i proportional to N_i^(1/tau), as a length-n
// vector over items.
std::vector<double> visits_to_policy(const SearchNode& root, int n, double temperature);

enum class MoveSelect {
  kSample,  // training: sample from pi
  kArgmax,  // evaluation: play the most-visited move
};

class Xoshiro256;
int sample_move(const std::vector<double>& pi, MoveSelect mode, Xoshiro256& rng);

// One search tree, owned by one game worker. The root is always a decision
// state (or terminal): forced passes are traversed automatically and never
// consume a branching decision.
class SearchTree {
 public:
  SearchTree(GameState root, Evaluator& evaluator, MctsConfig cfg, std::uint64_t noise_seed = 0);

  const GameState& root_state() const { return root_->state; }
  const SearchNode& root() const { return *root_; }

  // Runs cfg.iterations expansions and returns the improved policy over root
  // actions. Throws on a terminal root.
  std::vector<double> run_search();

  // Makes the given child the new root, discarding every other subtree.
  // Creating the child on the fly if the action was never visited.
  void advance_root(int item);

 private:
  SearchNode* descend_and_expand(std::vector<SearchNode*>& path);
  void expand(SearchNode& node, Evaluation eval);
  double leaf_value(SearchNode& leaf);

  std::unique_ptr<SearchNode> root_;
  Evaluator* evaluator_;
  MctsConfig cfg_;
  std::unique_ptr<Xoshiro256> noise_rng_;
};

// Applies the move, then fast-forwards through any forced passes so the
// result is either a decision state or terminal.
GameState apply_and_skip_passes(const GameState& state, Move m);

}  // namespace knapzero

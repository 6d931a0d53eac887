#include "knapzero/arena.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "knapzero/checkpoint.hpp"
#include "knapzero/parallel.hpp"
#include "knapzero/rng.hpp"

namespace knapzero {

Move greedy_move(const GameState& st) {
  if (st.is_terminal()) throw std::logic_error("greedy_move: game is over");
  for (int i = 0; i < st.instance().n; ++i) {
    if (st.take_fits(i)) return Move::take(i);
  }
  return Move::pass();
}

MinimaxSolver::MinimaxSolver(std::shared_ptr<const Instance> inst) : inst_(std::move(inst)) {
  if (inst_->n > kMinimaxMaxItems) {
    throw std::invalid_argument("MinimaxSolver: n > " + std::to_string(kMinimaxMaxItems));
  }
}

std::uint64_t MinimaxSolver::key(const GameState& st) const {
  std::uint64_t k = 0;
  for (int i = 0; i < inst_->n; ++i) {
    const int owner = st.owner(i);
    k = (k << 2) | static_cast<std::uint64_t>(owner + 1);  // 0 free, 1 p0, 2 p1
  }
  k = (k << 1) | static_cast<std::uint64_t>(st.to_move());
  k = (k << 2) | static_cast<std::uint64_t>(st.consecutive_passes());
  return k;
}

double MinimaxSolver::value(const GameState& st) {
  if (st.is_terminal()) return st.outcome().score_for(st.to_move());
  const std::uint64_t k = key(st);
  if (auto it = cache_.find(k); it != cache_.end()) return it->second;

  double best = -1.0;
  for (const Move& m : st.legal_moves()) {
    // The mover always flips across a move, so the child's value is the
    // opponent's score.
    const double v = 1.0 - value(st.apply_move(m));
    if (v > best) best = v;
  }
  cache_.emplace(k, best);
  return best;
}

Move MinimaxSolver::best_move(const GameState& st) {
  if (st.is_terminal()) throw std::logic_error("best_move: game is over");
  Move best = Move::pass();
  double best_v = -1.0;
  for (const Move& m : st.legal_moves()) {
    const double v = 1.0 - value(st.apply_move(m));
    if (v > best_v) {
      best_v = v;
      best = m;
    }
  }
  return best;
}

double minimax_value(const GameState& st) {
  MinimaxSolver solver(st.instance_ptr());
  return solver.value(st);
}

Evaluation MinimaxEvaluator::evaluate(const GameState& state) {
  const int n = state.instance().n;
  Evaluation eval;
  eval.policy.assign(n, 0.0);
  int legal = 0;
  for (int i = 0; i < n; ++i) {
    if (state.take_fits(i)) ++legal;
  }
  for (int i = 0; i < n; ++i) {
    if (state.take_fits(i)) eval.policy[i] = 1.0 / legal;
  }
  eval.value = solver_.value(state);
  return eval;
}

namespace {

class GreedyAgent : public Agent {
 public:
  explicit GreedyAgent(std::string label) : label_(std::move(label)) {}
  const std::string& label() const override { return label_; }
  void begin_game(const GameState&, std::uint64_t) override {}
  Move choose(const GameState& st) override { return greedy_move(st); }

 private:
  std::string label_;
};

class RandomAgent : public Agent {
 public:
  RandomAgent(std::uint64_t base_seed, std::string label)
      : base_seed_(base_seed), label_(std::move(label)), rng_(base_seed) {}
  const std::string& label() const override { return label_; }
  void begin_game(const GameState&, std::uint64_t seed) override {
    rng_ = Xoshiro256(derive_seed(base_seed_, {seed}));
  }
  Move choose(const GameState& st) override {
    const auto moves = st.legal_moves();
    return moves[rng_.uniform_below(moves.size())];
  }

 private:
  std::uint64_t base_seed_;
  std::string label_;
  Xoshiro256 rng_;
};

class MinimaxAgent : public Agent {
 public:
  explicit MinimaxAgent(std::string label) : label_(std::move(label)) {}
  const std::string& label() const override { return label_; }
  void begin_game(const GameState& initial, std::uint64_t) override {
    solver_ = std::make_unique<MinimaxSolver>(initial.instance_ptr());
  }
  Move choose(const GameState& st) override {
    if (!solver_) solver_ = std::make_unique<MinimaxSolver>(st.instance_ptr());
    return solver_->best_move(st);
  }

 private:
  std::string label_;
  std::unique_ptr<MinimaxSolver> solver_;
};

class NetAgent : public Agent {
 public:
  NetAgent(MlpParameters params, MctsConfig cfg, MoveSelect mode, std::string label)
      : params_(std::move(params)),
        evaluator_(params_),
        cfg_(cfg),
        mode_(mode),
        label_(std::move(label)),
        rng_(0) {}

  const std::string& label() const override { return label_; }

  void begin_game(const GameState& initial, std::uint64_t seed) override {
    tree_ = std::make_unique<SearchTree>(initial, evaluator_, cfg_,
                                         derive_seed(seed, {kNoiseStream}));
    rng_ = Xoshiro256(derive_seed(seed, {kAgentStream}));
  }

  Move choose(const GameState& st) override {
    if (!tree_) begin_game(st, 0);
    const auto pi = tree_->run_search();
    return Move::take(sample_move(pi, mode_, rng_));
  }

  void observe(Move m) override {
    if (tree_ && m.is_take()) tree_->advance_root(m.item);
  }

  int hidden_width() const { return params_.hidden; }

 private:
  MlpParameters params_;
  NetEvaluator evaluator_;
  MctsConfig cfg_;
  MoveSelect mode_;
  std::string label_;
  std::unique_ptr<SearchTree> tree_;
  Xoshiro256 rng_;
};

}  // namespace

AgentSpec AgentSpec::greedy(std::string label) {
  AgentSpec s;
  s.kind = Kind::kGreedy;
  s.label = std::move(label);
  return s;
}

AgentSpec AgentSpec::random(std::uint64_t seed, std::string label) {
  AgentSpec s;
  s.kind = Kind::kRandom;
  s.rng_seed = seed;
  s.label = std::move(label);
  return s;
}

AgentSpec AgentSpec::minimax(std::string label) {
  AgentSpec s;
  s.kind = Kind::kMinimax;
  s.label = std::move(label);
  return s;
}

AgentSpec AgentSpec::net(std::string checkpoint_path, MctsConfig mcts, std::string label) {
  AgentSpec s;
  s.kind = Kind::kNet;
  s.checkpoint_path = std::move(checkpoint_path);
  s.mcts = mcts;
  s.label = label.empty() ? std::filesystem::path(s.checkpoint_path).stem().string()
                          : std::move(label);
  return s;
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, int n) {
  switch (spec.kind) {
    case AgentSpec::Kind::kGreedy:
      return std::make_unique<GreedyAgent>(spec.label.empty() ? "greedy" : spec.label);
    case AgentSpec::Kind::kRandom:
      return std::make_unique<RandomAgent>(spec.rng_seed,
                                           spec.label.empty() ? "random" : spec.label);
    case AgentSpec::Kind::kMinimax:
      if (n > kMinimaxMaxItems) {
        throw std::invalid_argument("make_agent: minimax agent requires n <= " +
                                    std::to_string(kMinimaxMaxItems));
      }
      return std::make_unique<MinimaxAgent>(spec.label.empty() ? "minimax" : spec.label);
    case AgentSpec::Kind::kNet: {
      auto [params, meta] = load_checkpoint(spec.checkpoint_path);
      if (params.n != n) {
        throw std::invalid_argument("make_agent: dimension mismatch, checkpoint is for n=" +
                                    std::to_string(params.n) + " but arena plays n=" +
                                    std::to_string(n));
      }
      return std::make_unique<NetAgent>(std::move(params), spec.mcts, spec.move_select,
                                        spec.label);
    }
  }
  throw std::logic_error("make_agent: unknown agent kind");
}

std::unique_ptr<Agent> make_net_agent(const MlpParameters& params, MctsConfig mcts,
                                      MoveSelect move_select, std::string label) {
  return std::make_unique<NetAgent>(params, mcts, move_select, std::move(label));
}

GameRecord play_single_game(Agent& first, Agent& second,
                            std::shared_ptr<const Instance> inst, std::uint64_t game_seed) {
  GameRecord rec;
  rec.instance_seed = inst->seed;
  rec.n = inst->n;

  GameState state = new_game(inst);
  first.begin_game(state, derive_seed(game_seed, {kAgentStream, 0}));
  second.begin_game(state, derive_seed(game_seed, {kAgentStream, 1}));

  while (!state.is_terminal()) {
    if (!state.has_any_take()) {
      state = state.apply_move(Move::pass());
      rec.moves.push_back(Move::pass());
      continue;
    }
    Agent& mover = state.to_move() == 0 ? first : second;
    const Move m = mover.choose(state);
    state = state.apply_move(m);
    rec.moves.push_back(m);
    first.observe(m);
    second.observe(m);
  }
  rec.score0 = state.outcome().score0;
  return rec;
}

MatchResult play_match(const AgentSpec& a, const AgentSpec& b, int n, int games,
                       std::uint64_t seed, int workers) {
  if (games < 1) throw std::invalid_argument("play_match: games must be >= 1");

  MatchResult result;
  result.rows.resize(games);
  result.records.resize(games);
  std::vector<double> scores(games, 0.0);

  parallel_for(games, workers, [&](int g) {
    // Mirrored pairs: games 2k and 2k+1 share an instance with seats swapped.
    const std::uint64_t inst_seed = derive_seed(seed, {kGameStream, static_cast<std::uint64_t>(g / 2)});
    auto inst = std::make_shared<const Instance>(generate_weakly_correlated(n, inst_seed));
    const bool a_first = (g % 2 == 0);

    auto agent_a = make_agent(a, n);
    auto agent_b = make_agent(b, n);
    const std::uint64_t game_seed = derive_seed(seed, {kGameStream, static_cast<std::uint64_t>(g), 0x9e});
    GameRecord rec = a_first ? play_single_game(*agent_a, *agent_b, inst, game_seed)
                             : play_single_game(*agent_b, *agent_a, inst, game_seed);
    const double score_a = a_first ? rec.score0 : 1.0 - rec.score0;

    scores[g] = score_a;
    result.rows[g] = MatchGameRow{inst_seed, a_first ? 0 : 1, agent_a->label(), agent_b->label(),
                                  score_a};
    result.records[g] = std::move(rec);
  });

  for (double s : scores) result.score_a += s;
  result.score_b = static_cast<double>(games) - result.score_a;
  return result;
}

int WinMatrix::index_of(const std::string& label) const {
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] == label) return i;
  }
  throw std::invalid_argument("WinMatrix: unknown label " + label);
}

RoundRobinResult round_robin(const std::vector<AgentSpec>& agents, int n, int games_per_pair,
                             std::uint64_t seed, int workers) {
  const int k = static_cast<int>(agents.size());
  if (k < 2) throw std::invalid_argument("round_robin: need at least 2 agents");

  RoundRobinResult rr;
  rr.matrix.labels.reserve(k);
  for (const auto& a : agents) rr.matrix.labels.push_back(a.label);
  rr.matrix.wins.assign(k, std::vector<double>(k, 0.0));
  rr.matrix.games.assign(k, std::vector<long>(k, 0));

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const std::uint64_t pair_seed =
          derive_seed(seed, {kPairStream, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
      MatchResult m = play_match(agents[i], agents[j], n, games_per_pair, pair_seed, workers);
      rr.matrix.wins[i][j] += m.score_a;
      rr.matrix.wins[j][i] += m.score_b;
      rr.matrix.games[i][j] += games_per_pair;
      rr.matrix.games[j][i] += games_per_pair;
      rr.log.insert(rr.log.end(), m.rows.begin(), m.rows.end());
    }
  }
  return rr;
}

WinMatrix pool_by_group(const WinMatrix& matrix, const std::vector<std::string>& groups) {
  if (groups.size() != matrix.labels.size()) {
    throw std::invalid_argument("pool_by_group: group list size mismatch");
  }
  std::vector<std::string> pooled_labels;
  std::vector<int> group_of(groups.size());
  for (size_t i = 0; i < groups.size(); ++i) {
    const std::string& g = groups[i].empty() ? matrix.labels[i] : groups[i];
    auto it = std::find(pooled_labels.begin(), pooled_labels.end(), g);
    if (it == pooled_labels.end()) {
      group_of[i] = static_cast<int>(pooled_labels.size());
      pooled_labels.push_back(g);
    } else {
      group_of[i] = static_cast<int>(it - pooled_labels.begin());
    }
  }

  const int k = static_cast<int>(pooled_labels.size());
  WinMatrix out;
  out.labels = pooled_labels;
  out.wins.assign(k, std::vector<double>(k, 0.0));
  out.games.assign(k, std::vector<long>(k, 0));
  for (size_t i = 0; i < groups.size(); ++i) {
    for (size_t j = 0; j < groups.size(); ++j) {
      if (i == j) continue;
      const int gi = group_of[i];
      const int gj = group_of[j];
      if (gi == gj) continue;  // intra-group games stay off the pooled diagonal
      out.wins[gi][gj] += matrix.wins[i][j];
      out.games[gi][gj] += matrix.games[i][j];
    }
  }
  return out;
}

void write_match_log_csv(const std::string& path, const std::vector<MatchGameRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "instance_seed,first_mover,agent_a,agent_b,score_a\n";
  for (const auto& r : rows) {
    out << r.instance_seed << ',' << r.first_mover << ',' << r.agent_a << ',' << r.agent_b << ','
        << r.score_a << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_win_matrix_csv(const std::string& path, const WinMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "agent";
  for (const auto& l : m.labels) out << ',' << l;
  out << '\n';
  for (size_t i = 0; i < m.labels.size(); ++i) {
    out << m.labels[i];
    for (size_t j = 0; j < m.labels.size(); ++j) {
      out << ',';
      if (i != j && m.games[i][j] > 0) {
        out << m.wins[i][j] / static_cast<double>(m.games[i][j]);
      }
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_win_matrix_json(const std::string& path, const WinMatrix& m) {
  nlohmann::json j;
  j["labels"] = m.labels;
  j["wins"] = m.wins;
  j["games"] = m.games;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace knapzero

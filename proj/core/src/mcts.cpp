#include "knapzero/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "knapzero/rng.hpp"

namespace knapzero {

Evaluation NetEvaluator::evaluate(const GameState& state) {
  const int n = state.instance().n;
  std::vector<std::uint8_t> mask(n, 0);
  for (int i = 0; i < n; ++i) mask[i] = state.take_fits(i) ? 1 : 0;
  const auto input = state.encode();
  NetOutput out = forward(*params_, input, mask);
  return Evaluation{std::move(out.policy), out.value};
}

GameState apply_and_skip_passes(const GameState& state, Move m) {
  GameState next = state.apply_move(m);
  while (!next.is_terminal() && !next.has_any_take()) {
    next = next.apply_move(Move::pass());
  }
  return next;
}

namespace {

GameState skip_passes(GameState state) {
  while (!state.is_terminal() && !state.has_any_take()) {
    state = state.apply_move(Move::pass());
  }
  return state;
}

}  // namespace

double exploration_term(double c, double prior, int child_visits, int total_child_visits) {
  return c * prior * std::sqrt(static_cast<double>(total_child_visits)) /
         (1.0 + static_cast<double>(child_visits));
}

int select_child(const SearchNode& node, const MctsConfig& cfg) {
  if (!node.expanded || node.edges.empty()) {
    throw std::logic_error("select_child: node not expanded");
  }
  int total = 0;
  for (const auto& e : node.edges) {
    if (e.child) total += e.child->visit_count;
  }

  int best = 0;
  double best_score = -1e300;
  for (int i = 0; i < static_cast<int>(node.edges.size()); ++i) {
    const auto& e = node.edges[i];
    const int nv = e.child ? e.child->visit_count : 0;
    double q;
    if (nv > 0) {
      // Child scores are stored from the child mover's viewpoint; flip when
      // the mover changes across the edge (forced passes can keep it equal).
      const double child_q = e.child->mean_score();
      q = e.child->state.to_move() == node.state.to_move() ? child_q : 1.0 - child_q;
    } else {
      q = cfg.q_init == QInit::kParent && node.visit_count > 0 ? node.mean_score()
                                                               : cfg.q_init_value;
    }
    const double score = q + exploration_term(cfg.c_puct, e.prior, nv, total);
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::vector<double> visits_to_policy(const SearchNode& root, int n, double temperature) {
  std::vector<double> pi(n, 0.0);
  double denom = 0.0;
  for (const auto& e : root.edges) {
    const int nv = e.child ? e.child->visit_count : 0;
    if (nv == 0) continue;
    const double weight = temperature == 1.0
                              ? static_cast<double>(nv)
                              : std::pow(static_cast<double>(nv), 1.0 / temperature);
    pi[e.item] = weight;
    denom += weight;
  }
  if (denom <= 0.0) throw std::logic_error("visits_to_policy: no visited children");
  for (auto& x : pi) x /= denom;
  return pi;
}

int sample_move(const std::vector<double>& pi, MoveSelect mode, Xoshiro256& rng) {
  if (mode == MoveSelect::kArgmax) {
    int best = -1;
    double best_p = -1.0;
    for (int i = 0; i < static_cast<int>(pi.size()); ++i) {
      if (pi[i] > best_p) {
        best_p = pi[i];
        best = i;
      }
    }
    if (best < 0 || best_p <= 0.0) throw std::invalid_argument("sample_move: empty policy");
    return best;
  }
  const double u = rng.uniform01();
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < static_cast<int>(pi.size()); ++i) {
    if (pi[i] <= 0.0) continue;
    acc += pi[i];
    last = i;
    if (u < acc) return i;
  }
  if (last < 0) throw std::invalid_argument("sample_move: empty policy");
  return last;  // u landed in the roundoff tail
}

SearchTree::SearchTree(GameState root, Evaluator& evaluator, MctsConfig cfg,
                       std::uint64_t noise_seed)
    : root_(std::make_unique<SearchNode>(skip_passes(std::move(root)))),
      evaluator_(&evaluator),
      cfg_(cfg) {
  if (cfg_.iterations < 1) throw std::invalid_argument("MctsConfig: iterations must be >= 1");
  if (cfg_.c_puct <= 0.0) throw std::invalid_argument("MctsConfig: c_puct must be positive");
  if (cfg_.temperature <= 0.0) throw std::invalid_argument("MctsConfig: temperature must be positive");
  if (cfg_.root_noise) noise_rng_ = std::make_unique<Xoshiro256>(noise_seed);
}

void SearchTree::expand(SearchNode& node, Evaluation eval) {
  node.edges.clear();
  for (int i = 0; i < node.state.instance().n; ++i) {
    if (node.state.take_fits(i)) {
      SearchNode::Edge e;
      e.item = i;
      e.prior = eval.policy[i];
      node.edges.push_back(std::move(e));
    }
  }
  node.expanded = true;
}

double SearchTree::leaf_value(SearchNode& leaf) {
  if (leaf.state.is_terminal()) {
    return leaf.state.outcome().score_for(leaf.state.to_move());
  }
  Evaluation eval = evaluator_->evaluate(leaf.state);
  const double value = eval.value;
  expand(leaf, std::move(eval));
  return value;
}

std::vector<double> SearchTree::run_search() {
  if (root_->state.is_terminal()) throw std::logic_error("run_search: terminal root");

  if (!root_->expanded) {
    // The initial root expansion counts as one visit.
    const double v = leaf_value(*root_);
    root_->visit_count += 1;
    root_->total_score += v;
  }

  if (cfg_.root_noise && noise_rng_) {
    std::vector<double> noise(root_->edges.size());
    double total = 0.0;
    for (auto& g : noise) {
      g = noise_rng_->gamma(cfg_.noise_alpha);
      total += g;
    }
    if (total > 0.0) {
      for (size_t i = 0; i < root_->edges.size(); ++i) {
        root_->edges[i].prior = (1.0 - cfg_.noise_epsilon) * root_->edges[i].prior +
                                cfg_.noise_epsilon * noise[i] / total;
      }
    }
  }

  std::vector<SearchNode*> path;
  for (int it = 0; it < cfg_.iterations; ++it) {
    path.clear();
    path.push_back(root_.get());
    SearchNode* node = root_.get();
    while (!node->state.is_terminal() && node->expanded) {
      auto& edge = node->edges[select_child(*node, cfg_)];
      if (!edge.child) {
        edge.child =
            std::make_unique<SearchNode>(apply_and_skip_passes(node->state, Move::take(edge.item)));
      }
      node = edge.child.get();
      path.push_back(node);
    }
    const double v = leaf_value(*node);
    const int leaf_mover = node->state.to_move();
    for (SearchNode* visited : path) {
      visited->visit_count += 1;
      visited->total_score +=
          visited->state.to_move() == leaf_mover ? v : 1.0 - v;
    }
  }

  return visits_to_policy(*root_, root_->state.instance().n, cfg_.temperature);
}

void SearchTree::advance_root(int item) {
  if (!root_->expanded) {
    root_ = std::make_unique<SearchNode>(apply_and_skip_passes(root_->state, Move::take(item)));
    return;
  }
  for (auto& e : root_->edges) {
    if (e.item == item) {
      if (e.child) {
        root_ = std::move(e.child);  // siblings die with the old root
      } else {
        root_ = std::make_unique<SearchNode>(apply_and_skip_passes(root_->state, Move::take(item)));
      }
      return;
    }
  }
  throw std::logic_error("advance_root: action not legal at root");
}

}  // namespace knapzero

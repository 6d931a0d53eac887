#include "knapzero/game.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace knapzero {

GameState::GameState(std::shared_ptr<const Instance> inst) : inst_(std::move(inst)) {
  if (!inst_) throw std::invalid_argument("GameState: null instance");
  owner_.assign(inst_->n, -1);
}

bool GameState::take_fits(int item) const {
  return owner_[item] < 0 && weight_[to_move_] + inst_->weights[item] <= inst_->capacity;
}

bool GameState::has_any_take() const {
  for (int i = 0; i < inst_->n; ++i) {
    if (take_fits(i)) return true;
  }
  return false;
}

std::vector<Move> GameState::legal_moves() const {
  if (is_terminal()) throw std::logic_error("legal_moves: game is over");
  std::vector<Move> moves;
  for (int i = 0; i < inst_->n; ++i) {
    if (take_fits(i)) moves.push_back(Move::take(i));
  }
  if (moves.empty()) moves.push_back(Move::pass());
  return moves;
}

bool GameState::is_legal(Move m) const {
  if (is_terminal()) return false;
  if (m.is_pass()) return !has_any_take();
  if (m.item < 0 || m.item >= inst_->n) return false;
  return take_fits(m.item);
}

GameState GameState::apply_move(Move m) const {
  if (is_terminal()) throw std::logic_error("apply_move: game is over");
  GameState next(*this);
  if (m.is_pass()) {
    if (has_any_take()) throw std::logic_error("apply_move: voluntary pass not allowed");
    next.passes_ = passes_ + 1;
  } else {
    if (m.item < 0 || m.item >= inst_->n) throw std::logic_error("apply_move: item index out of range");
    if (owner_[m.item] >= 0) throw std::logic_error("apply_move: item already owned");
    if (weight_[to_move_] + inst_->weights[m.item] > inst_->capacity) {
      throw std::logic_error("apply_move: item exceeds capacity");
    }
    next.owner_[m.item] = static_cast<std::int8_t>(to_move_);
    next.weight_[to_move_] += inst_->weights[m.item];
    next.value_[to_move_] += inst_->values[m.item];
    next.passes_ = 0;
  }
  next.to_move_ = 1 - to_move_;
  return next;
}

Outcome GameState::outcome() const {
  if (!is_terminal()) throw std::logic_error("outcome: game not over");
  Outcome out;
  if (value_[0] > value_[1]) {
    out.score0 = 1.0;
  } else if (value_[1] > value_[0]) {
    out.score0 = 0.0;
  } else {
    out.score0 = 0.5;
  }
  return out;
}

std::vector<double> GameState::encode() const {
  const int n = inst_->n;
  std::vector<double> x(4 * static_cast<size_t>(n), 0.0);
  const int me = to_move_;
  for (int i = 0; i < n; ++i) {
    x[i] = inst_->weights[i];
    x[n + i] = inst_->values[i];
    if (owner_[i] == me) x[2 * n + i] = 1.0;
    if (owner_[i] == 1 - me) x[3 * n + i] = 1.0;
  }
  return x;
}

std::string GameRecord::to_line() const {
  std::ostringstream out;
  out << "inst_seed=" << instance_seed << " n=" << n << " moves=";
  for (size_t i = 0; i < moves.size(); ++i) {
    if (i) out << ',';
    if (moves[i].is_pass()) {
      out << "pass";
    } else {
      out << moves[i].item;
    }
  }
  out << " score0=" << score0;
  return out.str();
}

GameRecord GameRecord::from_line(std::string_view line) {
  GameRecord rec;
  bool have_seed = false, have_n = false, have_moves = false, have_score = false;
  std::istringstream tokens{std::string(line)};
  std::string tok;
  while (tokens >> tok) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("game record: malformed token '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "inst_seed") {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), rec.instance_seed);
      if (ec != std::errc{} || p != val.data() + val.size()) throw std::invalid_argument("game record: bad inst_seed");
      have_seed = true;
    } else if (key == "n") {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), rec.n);
      if (ec != std::errc{} || p != val.data() + val.size()) throw std::invalid_argument("game record: bad n");
      have_n = true;
    } else if (key == "moves") {
      have_moves = true;
      if (val.empty()) continue;
      size_t pos = 0;
      while (pos <= val.size()) {
        const size_t comma = val.find(',', pos);
        const std::string item = val.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item == "pass") {
          rec.moves.push_back(Move::pass());
        } else {
          int idx = 0;
          auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), idx);
          if (ec != std::errc{} || p != item.data() + item.size()) {
            throw std::invalid_argument("game record: bad move '" + item + "'");
          }
          rec.moves.push_back(Move::take(idx));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else if (key == "score0") {
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), rec.score0);
      if (ec != std::errc{} || p != val.data() + val.size()) throw std::invalid_argument("game record: bad score0");
      have_score = true;
    } else {
      throw std::invalid_argument("game record: unknown field '" + key + "'");
    }
  }
  if (!have_seed || !have_n || !have_moves || !have_score) {
    throw std::invalid_argument("game record: missing field");
  }
  return rec;
}

GameState replay(const Instance& inst, const std::vector<Move>& moves) {
  GameState st = new_game(std::make_shared<Instance>(inst));
  for (const Move& m : moves) {
    st = st.apply_move(m);
  }
  return st;
}

}  // namespace knapzero

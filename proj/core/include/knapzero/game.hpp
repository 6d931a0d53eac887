#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "knapzero/instance.hpp"

namespace knapzero {

// A turn action: take an item or pass. Passing is legal only when no take is.
struct Move {
  static constexpr int kPassItem = -1;
  int item = kPassItem;

  static Move take(int i) { return Move{i}; }
  static Move pass() { return Move{kPassItem}; }
  bool is_pass() const { return item == kPassItem; }
  bool is_take() const { return item >= 0; }
  friend bool operator==(const Move&, const Move&) = default;
};

// Terminal scores; zero-sum with a draw worth 0.5 per side.
struct Outcome {
  double score0 = 0.5;
  double score_for(int player) const { return player == 0 ? score0 : 1.0 - score0; }
};

// Immutable game position. apply_move returns a new state; copies are cheap
// (one byte per item plus cached totals), so states can be shared read-only
// across workers.
class GameState {
 public:
  explicit GameState(std::shared_ptr<const Instance> inst);

  const Instance& instance() const { return *inst_; }
  const std::shared_ptr<const Instance>& instance_ptr() const { return inst_; }

  int to_move() const { return to_move_; }
  int consecutive_passes() const { return passes_; }
  bool is_terminal() const { return passes_ == 2; }

  // -1 when free, otherwise the owning player.
  int owner(int item) const { return owner_[item]; }
  double player_weight(int player) const { return weight_[player]; }
  double player_value(int player) const { return value_[player]; }

  bool take_fits(int item) const;
  bool has_any_take() const;

  std::vector<Move> legal_moves() const;
  bool is_legal(Move m) const;

  [[nodiscard]] GameState apply_move(Move m) const;

  Outcome outcome() const;

  // Network input, length 4n: [weights; values; taken by player to move;
  // taken by opponent]. The perspective ordering lets one net play both seats.
  std::vector<double> encode() const;

 private:
  std::shared_ptr<const Instance> inst_;
  std::vector<std::int8_t> owner_;  // -1 free, else player id
  double weight_[2] = {0.0, 0.0};
  double value_[2] = {0.0, 0.0};
  int to_move_ = 0;
  int passes_ = 0;
};

inline GameState new_game(std::shared_ptr<const Instance> inst) {
  return GameState(std::move(inst));
}

// One finished game: enough to replay it exactly when the instance came from
// the default generator.
struct GameRecord {
  std::uint64_t instance_seed = 0;
  int n = 0;
  std::vector<Move> moves;
  double score0 = 0.5;

  std::string to_line() const;
  static GameRecord from_line(std::string_view line);
};

// Replays a record from a fresh game; throws if a recorded move is illegal.
GameState replay(const Instance& inst, const std::vector<Move>& moves);

}  // namespace knapzero

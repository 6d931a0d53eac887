#include "knapzero/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace knapzero {

namespace {

Selection make_selection(const Instance& inst, const std::vector<int>& chosen) {
  Selection sel;
  sel.chosen = chosen;
  for (int i : sel.chosen) {
    sel.total_value += inst.values[i];
    sel.total_weight += inst.weights[i];
  }
  return sel;
}

std::vector<int> mask_to_indices(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

}  // namespace

Selection brute_force_optimal(const Instance& inst) {
  if (inst.n > 20) throw std::invalid_argument("brute_force_optimal: n > 20");
  const int n = inst.n;
  const std::uint32_t limit = 1u << n;

  double best_value = 0.0;
  std::vector<int> best_set;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double weight = 0.0;
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        weight += inst.weights[i];
        value += inst.values[i];
      }
    }
    if (weight > inst.capacity) continue;
    if (value > best_value) {
      best_value = value;
      best_set = mask_to_indices(mask, n);
    } else if (value == best_value) {
      auto candidate = mask_to_indices(mask, n);
      if (std::lexicographical_compare(candidate.begin(), candidate.end(),
                                       best_set.begin(), best_set.end())) {
        best_set = std::move(candidate);
      }
    }
  }
  return make_selection(inst, best_set);
}

long long dp_weight_units(double weight, int resolution) {
  return static_cast<long long>(std::ceil(weight * static_cast<double>(resolution)));
}

long long dp_capacity_units(double capacity, int resolution) {
  // Tiny guard so capacities that are exact multiples of the grid (e.g. n/4
  // at resolution 10^4) are never floored one unit short.
  return static_cast<long long>(std::floor(capacity * static_cast<double>(resolution) + 1e-9));
}

Selection dp_optimal(const Instance& inst, int resolution) {
  if (resolution < 1000) throw std::invalid_argument("dp_optimal: resolution must be >= 1000");
  const int n = inst.n;
  const long long cap = dp_capacity_units(inst.capacity, resolution);
  if (cap < 0) return {};

  std::vector<long long> units(n);
  for (int i = 0; i < n; ++i) units[i] = dp_weight_units(inst.weights[i], resolution);

  const size_t width = static_cast<size_t>(cap) + 1;
  std::vector<double> best(width, 0.0);
  // take[i][u] records whether item i is taken at budget u on the optimal path.
  std::vector<std::vector<char>> take(n, std::vector<char>(width, 0));

  for (int i = 0; i < n; ++i) {
    const long long u_i = units[i];
    if (u_i > cap) continue;
    const double v_i = inst.values[i];
    for (long long u = cap; u >= u_i; --u) {
      const double with = best[static_cast<size_t>(u - u_i)] + v_i;
      if (with > best[static_cast<size_t>(u)]) {
        best[static_cast<size_t>(u)] = with;
        take[i][static_cast<size_t>(u)] = 1;
      }
    }
  }

  std::vector<int> chosen;
  long long u = cap;
  for (int i = n - 1; i >= 0; --i) {
    if (take[i][static_cast<size_t>(u)]) {
      chosen.push_back(i);
      u -= units[i];
    }
  }
  std::reverse(chosen.begin(), chosen.end());
  return make_selection(inst, chosen);
}

}  // namespace knapzero

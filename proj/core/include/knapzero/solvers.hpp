#pragma once

#include <vector>

#include "knapzero/instance.hpp"

namespace knapzero {

// A single-player item selection. total_weight never exceeds the capacity of
// the instance it was computed for.
struct Selection {
  std::vector<int> chosen;  // ascending item indices
  double total_value = 0.0;
  double total_weight = 0.0;
};

// Exact continuous-weight optimum by enumerating all 2^n subsets. Ties broken
// by lexicographically smallest index set. Rejects n > 20.
Selection brute_force_optimal(const Instance& inst);

// Scaled-integer dynamic program: item weights are rounded UP to a grid of
// `resolution` buckets per unit weight and the capacity rounded down, so any
// selection feasible on the grid is feasible under the true weights. Exact
// for the discretized weights; approaches the continuous optimum as the
// resolution grows. Requires resolution >= 1000.
Selection dp_optimal(const Instance& inst, int resolution = 10000);

// Grid units used by dp_optimal, exposed so oracles can replicate the
// discretization exactly.
long long dp_weight_units(double weight, int resolution);
long long dp_capacity_units(double capacity, int resolution);

}  // namespace knapzero

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace knapzero {

// A two-player knapsack instance. Items are kept sorted in strictly
// descending order of values[i]/weights[i]; both players share the same
// per-player capacity.
struct Instance {
  int n = 0;
  std::vector<double> values;
  std::vector<double> weights;
  double capacity = 0.0;
  std::uint64_t seed = 0;

  double ratio(int i) const { return values[i] / weights[i]; }
};

// Draws a weakly correlated instance: weights uniform on [0,1) (resampled
// while below 1e-6), values uniform on [max(0,w-0.1), min(1,w+0.1)].
// Duplicate values or duplicate v/w ratios resample the offending item.
// Items come out ratio-sorted and capacity is n/4. Deterministic per (n, seed).
Instance generate_weakly_correlated(int n, std::uint64_t seed);

// Throws std::invalid_argument naming the violated invariant.
void validate_instance(const Instance& inst);

// One-line, self-describing record with full decimal precision:
//   n=3 capacity=0.75 seed=42 values=v0,v1,v2 weights=w0,w1,w2
std::string serialize_instance(const Instance& inst);

// Parses a record and validates every Instance invariant.
Instance parse_instance(std::string_view line);

void write_instances(const std::string& path, const std::vector<Instance>& instances);
std::vector<Instance> read_instances(const std::string& path);

}  // namespace knapzero

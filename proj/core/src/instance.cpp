#include "knapzero/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "knapzero/rng.hpp"

namespace knapzero {

namespace {

constexpr double kMinWeight = 1e-6;
constexpr double kBand = 0.1;

struct Item {
  double value;
  double weight;
};

Item draw_item(Xoshiro256& rng) {
  double w = rng.uniform01();
  while (w < kMinWeight) w = rng.uniform01();
  const double lo = std::max(0.0, w - kBand);
  const double hi = std::min(1.0, w + kBand);
  const double v = rng.uniform(lo, hi);
  return {v, w};
}

bool collides(const std::vector<Item>& items, int i) {
  for (int j = 0; j < static_cast<int>(items.size()); ++j) {
    if (j == i) continue;
    if (items[j].value == items[i].value) return true;
    if (items[j].value / items[j].weight == items[i].value / items[i].weight) return true;
  }
  return false;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(std::string_view s, const std::string& field) {
  double out = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("instance record: invalid number in field '" + field + "'");
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view s, const std::string& field) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    const size_t comma = s.find(',', pos);
    const std::string_view tok = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_double(tok, field));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Instance generate_weakly_correlated(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_weakly_correlated: n must be >= 1");
  Xoshiro256 rng(seed);

  std::vector<Item> items(n);
  for (auto& item : items) item = draw_item(rng);
  // Duplicate values or ratios break the strict sort order; redraw just the
  // offending item. Probability is ~0 with 53-bit uniforms, but the contract
  // requires it.
  for (int i = 0; i < n; ++i) {
    while (collides(items, i)) items[i] = draw_item(rng);
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.value / a.weight > b.value / b.weight;
  });

  Instance inst;
  inst.n = n;
  inst.seed = seed;
  inst.capacity = static_cast<double>(n) / 4.0;
  inst.values.reserve(n);
  inst.weights.reserve(n);
  for (const auto& item : items) {
    inst.values.push_back(item.value);
    inst.weights.push_back(item.weight);
  }
  return inst;
}

void validate_instance(const Instance& inst) {
  if (inst.n < 1) throw std::invalid_argument("instance invalid: n must be >= 1");
  if (static_cast<int>(inst.values.size()) != inst.n ||
      static_cast<int>(inst.weights.size()) != inst.n) {
    throw std::invalid_argument("instance invalid: item count mismatch");
  }
  if (!(inst.capacity >= 0.0) || !std::isfinite(inst.capacity)) {
    throw std::invalid_argument("instance invalid: capacity must be finite and non-negative");
  }
  for (int i = 0; i < inst.n; ++i) {
    const double v = inst.values[i];
    const double w = inst.weights[i];
    if (!(w > 0.0) || w > 1.0) throw std::invalid_argument("instance invalid: weight out of range (0,1]");
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("instance invalid: value out of range [0,1]");
    if (v < std::max(0.0, w - kBand) || v > std::min(1.0, w + kBand)) {
      throw std::invalid_argument("instance invalid: correlation band violated");
    }
  }
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i + 1; j < inst.n; ++j) {
      if (inst.values[i] == inst.values[j]) {
        throw std::invalid_argument("instance invalid: duplicate values");
      }
    }
  }
  for (int i = 0; i + 1 < inst.n; ++i) {
    if (!(inst.ratio(i) > inst.ratio(i + 1))) {
      throw std::invalid_argument("instance invalid: ratio order violated");
    }
  }
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "n=" << inst.n << " capacity=" << format_double(inst.capacity) << " seed=" << inst.seed;
  out << " values=";
  for (int i = 0; i < inst.n; ++i) {
    if (i) out << ',';
    out << format_double(inst.values[i]);
  }
  out << " weights=";
  for (int i = 0; i < inst.n; ++i) {
    if (i) out << ',';
    out << format_double(inst.weights[i]);
  }
  return out.str();
}

Instance parse_instance(std::string_view line) {
  Instance inst;
  bool have_n = false, have_cap = false, have_seed = false, have_values = false, have_weights = false;

  std::istringstream tokens{std::string(line)};
  std::string tok;
  while (tokens >> tok) {
    const size_t eq = tok.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("instance record: malformed token '" + tok + "'");
    }
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "n") {
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), inst.n);
      if (ec != std::errc{} || ptr != val.data() + val.size()) {
        throw std::invalid_argument("instance record: invalid number in field 'n'");
      }
      have_n = true;
    } else if (key == "capacity") {
      inst.capacity = parse_double(val, key);
      have_cap = true;
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
      if (ec != std::errc{} || ptr != val.data() + val.size()) {
        throw std::invalid_argument("instance record: invalid number in field 'seed'");
      }
      inst.seed = s;
      have_seed = true;
    } else if (key == "values") {
      inst.values = parse_double_list(val, key);
      have_values = true;
    } else if (key == "weights") {
      inst.weights = parse_double_list(val, key);
      have_weights = true;
    } else {
      throw std::invalid_argument("instance record: unknown field '" + key + "'");
    }
  }
  if (!have_n || !have_cap || !have_seed || !have_values || !have_weights) {
    throw std::invalid_argument("instance record: missing field");
  }
  validate_instance(inst);
  return inst;
}

void write_instances(const std::string& path, const std::vector<Instance>& instances) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& inst : instances) out << serialize_instance(inst) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Instance> read_instances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<Instance> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_instance(line));
  }
  return out;
}

}  // namespace knapzero

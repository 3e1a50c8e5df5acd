#include "coderoute/random_tapes.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include "coderoute/errors.hpp"

namespace coderoute {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

class Generator {
 public:
  Generator(std::mt19937_64& rng, const RandomTapeOptions& options, ProtocolTape& tape)
      : rng_(rng), options_(options), tape_(tape) {}

  void grow(const std::string& share, Side holder, int log_dim, std::size_t depth_left, bool is_root) {
    const bool can_encode = log_dim == 1 && depth_left > 0 && options_.max_arity >= 2;
    double leaf_p = depth_left == 0 ? 1.0 : 0.3;
    if (is_root) leaf_p = 0.0;
    if (!can_encode && depth_left > 0) leaf_p = std::max(leaf_p, 0.6);

    if (chance(rng_, leaf_p)) {
      // Non-root shares may simply be kept.
      if (!is_root && chance(rng_, 0.15)) return;
      tape_.records.push_back({share, {}, UnitRoute{random_bit()}});
      return;
    }
    if (!can_encode || chance(rng_, 0.2)) {
      const std::string out = fresh();
      const Side to = opposite(holder);
      tape_.records.push_back({share, {out}, Teleport{to}});
      grow(out, to, log_dim, depth_left - 1, false);
      return;
    }

    CodeSpec code = CodeSpec::threshold23();
    if (options_.max_arity < 3 || chance(rng_, 0.35)) {
      const std::size_t shares = uniform(rng_, 2, std::min<std::size_t>(3, options_.max_arity));
      code = CodeSpec::smith(random_indicator_program(rng_, shares));
    }
    const auto dims = code.share_log_dims();
    std::vector<std::string> outs;
    for (std::size_t j = 0; j < dims.size(); ++j) outs.push_back(fresh());
    tape_.records.push_back({share, outs, Encode{code}});
    for (std::size_t j = 0; j < outs.size(); ++j) grow(outs[j], holder, dims[j], depth_left - 1, false);
  }

 private:
  BitRef random_bit() {
    if (chance(rng_, 0.05)) return BitRef::constant(chance(rng_, 0.5) ? Side::Right : Side::Left);
    const Side side = chance(rng_, 0.5) ? Side::Right : Side::Left;
    const std::size_t n = side == Side::Left ? tape_.left_bits : tape_.right_bits;
    return BitRef::input(side, uniform(rng_, 1, n), chance(rng_, 0.5));
  }

  std::string fresh() { return "v" + std::to_string(++counter_); }

  std::mt19937_64& rng_;
  const RandomTapeOptions& options_;
  ProtocolTape& tape_;
  std::size_t counter_ = 0;
};

}  // namespace

SpanProgram random_indicator_program(std::mt19937_64& rng, std::size_t shares) {
  if (shares == 0) throw ValidationError("a code needs at least one share");
  while (true) {
    const std::size_t cols = uniform(rng, 1, 2);
    FieldMatrix m(3, 0, cols);
    std::vector<RowLabel> labels;
    std::vector<Scalar> row(cols);
    for (std::size_t i = 1; i <= shares; ++i) {
      const std::size_t rows = chance(rng, 0.8) ? 1 : 2;
      for (std::size_t r = 0; r < rows; ++r) {
        for (auto& v : row) v = static_cast<Scalar>(uniform(rng, 0, 2));
        m.append_row(row);
        labels.push_back({i, 1});
      }
    }
    std::vector<Scalar> target(cols);
    for (auto& v : target) v = static_cast<Scalar>(uniform(rng, 0, 2));
    if (std::all_of(target.begin(), target.end(), [](Scalar v) { return v == 0; })) continue;

    SpanProgram sp(std::move(m), std::move(labels), std::move(target), shares);
    const auto table = truth_table(sp);
    if (!table.back()) continue;  // constant 0
    if (check_indicator_validity(table).valid) return sp;
  }
}

ProtocolTape random_tape(std::mt19937_64& rng, const RandomTapeOptions& options) {
  if (options.max_depth == 0 || options.max_bits == 0) throw ValidationError("random tapes need depth and bits");
  ProtocolTape tape;
  tape.base = 3;
  tape.left_bits = uniform(rng, 1, options.max_bits);
  tape.right_bits = uniform(rng, 1, options.max_bits);
  Generator(rng, options, tape).grow(tape.root.id, Side::Left, 1, options.max_depth - 1, true);
  return tape;
}

std::vector<ProtocolTape> random_tape_corpus(std::uint64_t seed, std::size_t count, const RandomTapeOptions& options) {
  std::mt19937_64 rng(seed);
  std::vector<ProtocolTape> tapes;
  tapes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) tapes.push_back(random_tape(rng, options));
  return tapes;
}

std::uint64_t seed_from_environment() {
  const char* text = std::getenv("CODEROUTE_SEED");
  if (!text || !*text) return kDefaultSeed;
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text, text + std::strlen(text), seed);
  if (ec != std::errc() || *end != '\0') {
    throw ValidationError(std::string("CODEROUTE_SEED must be an unsigned integer, got '") + text + "'");
  }
  return seed;
}

}  // namespace coderoute

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "coderoute/protocol.hpp"

namespace coderoute {

struct RandomTapeOptions {
  std::size_t max_depth = 6;
  std::size_t max_arity = 3;
  std::size_t max_bits = 6;  // per side
};

/// Random valid base-3 tape mixing 2-of-3 codes, small Smith codes,
/// teleports, unit-routes and kept shares.
ProtocolTape random_tape(std::mt19937_64& rng, const RandomTapeOptions& options = {});

/// Small monotone program over Z_3 whose function is a valid, non-constant
/// indicator. Every input labels at least one row.
SpanProgram random_indicator_program(std::mt19937_64& rng, std::size_t shares);

std::vector<ProtocolTape> random_tape_corpus(std::uint64_t seed, std::size_t count,
                                             const RandomTapeOptions& options = {});

inline constexpr std::uint64_t kDefaultSeed = 0xC0DE5EED;

/// CODEROUTE_SEED if set to an integer, the default seed otherwise.
std::uint64_t seed_from_environment();

}  // namespace coderoute

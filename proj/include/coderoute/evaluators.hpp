#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>

#include "coderoute/protocol.hpp"

namespace coderoute {

struct OwnerResult {
  std::uint8_t owner;     // side on which Q is recoverable
  std::size_t row_ops;    // row operations spent in span-membership tests
  std::size_t row_op_bound;  // sum over visited encodes of (total output log-dimension)^2
};

/// Recursive ownership: unit-routes return their bit, teleports pass their
/// output through, encodes test whether the right-held shares span the
/// target of the code's access program. Throws InternalError if the row
/// operation count ever exceeds the bound.
OwnerResult get_owner(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

inline constexpr std::size_t kDefaultFanInCap = 16;

/// Bottom-up multilinear extension mod p. Returns the root value, which is
/// 0 or 1 on every valid tape; any other value is an InternalError.
/// Encodes with more than fan_in_cap shares raise CapabilityError.
std::uint8_t eval_modp(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                       std::uint32_t p, std::size_t fan_in_cap = kDefaultFanInCap);

/// Multilinear extension of a truth table (z_1 most significant) at `values`.
Scalar multilinear_extension(std::span<const std::uint8_t> table, std::span<const Scalar> values, const PrimeField& f);

/// Turns an accepting-path count F0 (and F0bar for the complement machine)
/// into counts that are exactly the 0/1 indicator of F0 != 0 mod p.
std::pair<Scalar, Scalar> lemma3_transform(std::uint64_t f0, std::uint64_t f0bar, std::uint32_t p);

/// Over-ride set of the pruning evaluator: share -> side it now counts as routed to.
using OverrideSet = std::map<std::size_t, std::uint8_t>;

struct DepthFirstStep {
  std::size_t current;  // share being visited
  bool pruned;          // the current node was just collapsed into R
  const OverrideSet& overrides;
};

struct DepthFirstOptions {
  std::size_t arity_bound = 3;
  std::function<void(const DepthFirstStep&)> trace;
};

struct DepthFirstResult {
  std::uint8_t owner;
  std::size_t peak_overrides;  // largest |R| seen
  std::size_t steps;
  std::size_t prunes;
};

/// Depth-first pruning evaluator. It keeps only the current share and the
/// over-ride set; layers and parents are recomputed from the tape on demand.
/// Throws CapabilityError if an encode has more shares than the arity bound.
DepthFirstResult eval_depth_first(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                                  std::span<const std::uint8_t> y, const DepthFirstOptions& options = {});

/// The tape as modified by R: every overridden share becomes a constant
/// unit-route and the records below it are dropped.
ProtocolTape effective_tape(const ProtocolTree& tree, const OverrideSet& overrides);

/// Number of shares in the effective tree.
std::size_t effective_size(const ProtocolTree& tree, const OverrideSet& overrides);

}  // namespace coderoute

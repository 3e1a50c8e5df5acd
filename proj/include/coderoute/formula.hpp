#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coderoute/protocol.hpp"

namespace coderoute {

/// Boolean formula in negation normal form: binary AND/OR over literals
/// x_i, y_i and their negations.
struct Formula {
  enum class Op { Leaf, And, Or };

  Op op = Op::Leaf;
  BitRef literal;                 // Leaf only
  std::vector<Formula> children;  // And/Or: exactly two

  static Formula leaf(BitRef literal);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);

  /// Leaf occurrences, counted with repetition.
  std::size_t size() const;
  /// Largest variable index used on each side.
  std::size_t left_bits() const;
  std::size_t right_bits() const;

  bool evaluate(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const;
  std::string to_string() const;

  bool operator==(const Formula&) const = default;
};

/// Parses AND(a,b), OR(a,b), NOT(a), x<i>, y<i> (whitespace ignored) and
/// pushes every NOT down to the variables.
Formula parse_formula(std::string_view text);

}  // namespace coderoute

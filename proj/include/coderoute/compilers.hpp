#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "coderoute/errors.hpp"
#include "coderoute/formula.hpp"
#include "coderoute/protocol.hpp"
#include "coderoute/span_program.hpp"

namespace coderoute {

/// Rejection of a candidate indicator function, with the offending inputs.
class IndicatorError : public ValidationError {
 public:
  explicit IndicatorError(IndicatorViolation witness)
      : ValidationError("invalid indicator function: " + witness.describe()), witness_(std::move(witness)) {}

  const IndicatorViolation& witness() const { return witness_; }

 private:
  IndicatorViolation witness_;
};

/// Concatenated 2-of-3 qutrit codes. AND keeps one share with the holder,
/// OR sends it across; literals unit-route their share.
ProtocolTape compile_formula(const Formula& f);

/// One Smith encode of Q on the left, share i unit-routed on assignment[i].
/// Throws IndicatorError if the program's function is not a valid indicator.
ProtocolTape compile_theorem1_indicator(const SpanProgram& msp, std::span<const BitRef> assignment);

/// Decomposes sp and routes copies and negated copies of every input bit,
/// the first alpha_len bits taken from the left string and the rest from
/// the right one. The and-bit share always goes right.
ProtocolTape compile_theorem2(const SpanProgram& sp, std::size_t alpha_len, std::size_t beta_len);

enum class GardenHoseFunction { And, Or };
GardenHoseFunction parse_garden_hose_function(std::string_view name);

/// The conditional Bell measurements of the two-party AND/OR garden-hose
/// strategies, unrolled for the given inputs.
ProtocolTape compile_garden_hose_example(GardenHoseFunction f, std::uint8_t x, std::uint8_t y);

/// Compiled forms of AND(x1,y1), OR(x1,y1) and AND(NOT(x1),OR(x1,y1)).
ProtocolTape example_and_tape();
ProtocolTape example_or_tape();
ProtocolTape example_nested_tape();

}  // namespace coderoute

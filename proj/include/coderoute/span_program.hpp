#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coderoute/field_matrix.hpp"

namespace coderoute {

/// Bit strings are stored one bit per byte, most natural for indexing.
using Bits = std::vector<std::uint8_t>;

Bits parse_bits(std::string_view text);
std::string format_bits(std::span<const std::uint8_t> bits);

/// Row label: the row is activated when input `input` (1-based) equals `epsilon`.
struct RowLabel {
  std::size_t input;
  std::uint8_t epsilon;

  bool operator==(const RowLabel&) const = default;
};

/// A span program (M, phi, t) over Z_p on `num_inputs` input bits.
///
/// Accepts z iff the target lies in the span of the rows whose label
/// (k, eps) satisfies z_k == eps. Input indices are 1-based throughout.
class SpanProgram {
 public:
  SpanProgram(FieldMatrix matrix, std::vector<RowLabel> labels, std::vector<Scalar> target, std::size_t num_inputs);

  std::uint32_t modulus() const { return matrix_.modulus(); }
  const FieldMatrix& matrix() const { return matrix_; }
  std::span<const RowLabel> labels() const { return labels_; }
  std::span<const Scalar> target() const { return target_; }
  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t size() const { return matrix_.rows(); }

  bool is_monotone() const;
  /// Number of rows labelled with input k (1-based).
  std::size_t rows_for_input(std::size_t k) const;

  bool operator==(const SpanProgram&) const = default;

 private:
  FieldMatrix matrix_;
  std::vector<RowLabel> labels_;
  std::vector<Scalar> target_;
  std::size_t num_inputs_;
};

/// 0-based indices of the rows activated by z.
std::vector<std::size_t> activated_rows(const SpanProgram& sp, std::span<const std::uint8_t> z);

bool evaluate(const SpanProgram& sp, std::span<const std::uint8_t> z);

inline constexpr std::size_t kMaxTableInputs = 20;

/// Truth table indexed so that z_1 is the most significant bit of the index.
std::vector<std::uint8_t> truth_table(const SpanProgram& sp);

Bits index_to_bits(std::size_t index, std::size_t n);
std::size_t bits_to_index(std::span<const std::uint8_t> z);

enum class IndicatorViolationKind { NotMonotone, Cloning };

/// Witness against a candidate indicator function.
/// NotMonotone: first <= second bitwise but f(first) = 1 > f(second) = 0.
/// Cloning: second is the complement of first and both evaluate to 1.
struct IndicatorViolation {
  IndicatorViolationKind kind;
  Bits first;
  Bits second;

  std::string describe() const;
};

struct IndicatorCheck {
  bool valid;
  std::optional<IndicatorViolation> witness;
};

IndicatorCheck check_indicator_validity(std::span<const std::uint8_t> table);

/// f'(z, b) = f(z) AND b: one extra row and column, new input n+1.
SpanProgram extend_with_and_bit(const SpanProgram& sp);

/// Where bit i of g(z, b) comes from.
struct GBit {
  std::size_t source;  // 1-based index into (z, b)
  bool negated;

  bool operator==(const GBit&) const = default;
};

struct DecompositionResult {
  SpanProgram msp;
  std::vector<GBit> g_map;  // 2m + 1 entries
  std::size_t original_size;
  std::size_t msp_size;
};

/// Applies g to (z, b): (z_1, !z_1, ..., z_m, !z_m, b).
Bits apply_g(std::span<const GBit> g_map, std::span<const std::uint8_t> zb);

/// Turns an and-bit-extended program into a monotone program on 2m + 1 inputs.
DecompositionResult monotonize(const SpanProgram& extended);

/// extend_with_and_bit followed by monotonize, with every structural
/// property re-checked; a failed check throws InternalError.
DecompositionResult decompose(const SpanProgram& sp);

std::vector<std::string> library_names();
SpanProgram library_program(std::string_view name);

/// 2-of-3 threshold access structure over Z_3: rows (0,1), (1,1), (2,1), target (1,0).
/// Row i is share i of the qutrit code |s> -> sum_t |t, t+s, t+2s>.
const SpanProgram& threshold23_program();

}  // namespace coderoute

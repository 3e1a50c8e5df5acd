#include "coderoute/span_program.hpp"

#include <algorithm>
#include <utility>

#include "coderoute/errors.hpp"

namespace coderoute {

Bits parse_bits(std::string_view text) {
  Bits bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw ValidationError("bit string '" + std::string(text) + "' may only contain 0 and 1");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

SpanProgram::SpanProgram(FieldMatrix matrix, std::vector<RowLabel> labels, std::vector<Scalar> target,
                         std::size_t num_inputs)
    : matrix_(std::move(matrix)), labels_(std::move(labels)), target_(std::move(target)), num_inputs_(num_inputs) {
  if (labels_.size() != matrix_.rows()) {
    throw ValidationError("span program has " + std::to_string(matrix_.rows()) + " rows but " +
                          std::to_string(labels_.size()) + " row labels");
  }
  if (target_.size() != matrix_.cols()) {
    throw ValidationError("target length " + std::to_string(target_.size()) + " does not match " +
                          std::to_string(matrix_.cols()) + " columns");
  }
  bool nonzero = false;
  for (Scalar v : target_) {
    if (v >= modulus()) throw ValidationError("target entry not reduced mod p");
    nonzero = nonzero || v != 0;
  }
  if (!nonzero) throw ValidationError("span program target must be non-zero");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto& l = labels_[i];
    if (l.input < 1 || l.input > num_inputs_) {
      throw ValidationError("row " + std::to_string(i + 1) + " refers to input " + std::to_string(l.input) +
                            ", outside [1, " + std::to_string(num_inputs_) + "]");
    }
    if (l.epsilon > 1) throw ValidationError("row " + std::to_string(i + 1) + " has epsilon outside {0,1}");
  }
}

bool SpanProgram::is_monotone() const {
  return std::all_of(labels_.begin(), labels_.end(), [](const RowLabel& l) { return l.epsilon == 1; });
}

std::size_t SpanProgram::rows_for_input(std::size_t k) const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(), [k](const RowLabel& l) { return l.input == k; }));
}

std::vector<std::size_t> activated_rows(const SpanProgram& sp, std::span<const std::uint8_t> z) {
  if (z.size() != sp.num_inputs()) {
    throw ValidationError("input has " + std::to_string(z.size()) + " bits, program expects " +
                          std::to_string(sp.num_inputs()));
  }
  std::vector<std::size_t> rows;
  const auto labels = sp.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (z[labels[i].input - 1] == labels[i].epsilon) rows.push_back(i);
  }
  return rows;
}

bool evaluate(const SpanProgram& sp, std::span<const std::uint8_t> z) {
  const auto rows = activated_rows(sp, z);
  return in_span(sp.matrix().select_rows(rows), sp.target());
}

Bits index_to_bits(std::size_t index, std::size_t n) {
  Bits z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = static_cast<std::uint8_t>((index >> (n - 1 - j)) & 1u);
  return z;
}

std::size_t bits_to_index(std::span<const std::uint8_t> z) {
  std::size_t index = 0;
  for (auto b : z) index = (index << 1) | (b & 1u);
  return index;
}

std::vector<std::uint8_t> truth_table(const SpanProgram& sp) {
  const std::size_t n = sp.num_inputs();
  if (n > kMaxTableInputs) {
    throw ValidationError("truth table of " + std::to_string(n) + " inputs exceeds the limit of " +
                          std::to_string(kMaxTableInputs));
  }
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = evaluate(sp, index_to_bits(i, n)) ? 1 : 0;
  return table;
}

std::string IndicatorViolation::describe() const {
  if (kind == IndicatorViolationKind::NotMonotone) {
    return "not monotone: f(" + format_bits(first) + ")=1 but f(" + format_bits(second) + ")=0";
  }
  return "violates no-cloning: f(" + format_bits(first) + ")=1 and f(" + format_bits(second) + ")=1";
}

IndicatorCheck check_indicator_validity(std::span<const std::uint8_t> table) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < table.size()) ++n;
  if ((std::size_t{1} << n) != table.size() || n > kMaxTableInputs) {
    throw ValidationError("truth table length must be 2^n with n <= 20");
  }
  // Monotone iff no single 0 -> 1 flip turns an accepting input into a rejecting one.
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!table[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t mask = std::size_t{1} << (n - 1 - j);
      if ((i & mask) == 0 && !table[i | mask]) {
        return {false, IndicatorViolation{IndicatorViolationKind::NotMonotone, index_to_bits(i, n),
                                          index_to_bits(i | mask, n)}};
      }
    }
  }
  const std::size_t all = table.size() - 1;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] && table[all ^ i]) {
      return {false,
              IndicatorViolation{IndicatorViolationKind::Cloning, index_to_bits(i, n), index_to_bits(all ^ i, n)}};
    }
  }
  return {true, std::nullopt};
}

SpanProgram extend_with_and_bit(const SpanProgram& sp) {
  const FieldMatrix& m = sp.matrix();
  const std::size_t d = m.rows();
  const std::size_t e = m.cols();
  FieldMatrix out(sp.modulus(), 0, e + 1);
  std::vector<Scalar> row(e + 1);
  for (std::size_t r = 0; r < d; ++r) {
    std::copy(m.row(r).begin(), m.row(r).end(), row.begin());
    row[e] = 0;
    out.append_row(row);
  }
  std::fill(row.begin(), row.end(), 0);
  row[e] = 1;
  out.append_row(row);

  std::vector<RowLabel> labels(sp.labels().begin(), sp.labels().end());
  labels.push_back({sp.num_inputs() + 1, 1});
  std::vector<Scalar> target(sp.target().begin(), sp.target().end());
  target.push_back(1);
  return SpanProgram(std::move(out), std::move(labels), std::move(target), sp.num_inputs() + 1);
}

Bits apply_g(std::span<const GBit> g_map, std::span<const std::uint8_t> zb) {
  Bits out;
  out.reserve(g_map.size());
  for (const auto& g : g_map) {
    if (g.source < 1 || g.source > zb.size()) throw ValidationError("g refers to a bit outside its input");
    const std::uint8_t bit = zb[g.source - 1];
    out.push_back(g.negated ? static_cast<std::uint8_t>(1 - bit) : bit);
  }
  return out;
}

namespace {

void require_and_bit_shape(const SpanProgram& sp) {
  const std::size_t n = sp.num_inputs();
  const FieldMatrix& m = sp.matrix();
  if (n == 0 || m.rows() == 0) throw ValidationError("monotonize: program has no and-bit row");
  const std::size_t last_row = m.rows() - 1;
  const std::size_t last_col = m.cols() - 1;
  const auto labels = sp.labels();
  bool ok = labels[last_row] == RowLabel{n, 1} && sp.target()[last_col] == 1;
  for (std::size_t c = 0; ok && c < m.cols(); ++c) ok = m.at(last_row, c) == (c == last_col ? 1u : 0u);
  for (std::size_t r = 0; ok && r < last_row; ++r) ok = m.at(r, last_col) == 0 && labels[r].input != n;
  if (!ok) {
    throw ValidationError("monotonize: last input is not an and-bit (expected the output of extend_with_and_bit)");
  }
}

}  // namespace

DecompositionResult monotonize(const SpanProgram& extended) {
  require_and_bit_shape(extended);
  const std::size_t m = extended.num_inputs() - 1;
  std::vector<RowLabel> labels;
  labels.reserve(extended.size());
  for (const auto& l : extended.labels()) {
    if (l.input == m + 1) {
      labels.push_back({2 * m + 1, 1});
    } else {
      labels.push_back({l.epsilon == 1 ? 2 * l.input - 1 : 2 * l.input, 1});
    }
  }
  std::vector<GBit> g_map;
  g_map.reserve(2 * m + 1);
  for (std::size_t i = 1; i <= m; ++i) {
    g_map.push_back({i, false});
    g_map.push_back({i, true});
  }
  g_map.push_back({m + 1, false});

  SpanProgram msp(extended.matrix(), std::move(labels),
                  std::vector<Scalar>(extended.target().begin(), extended.target().end()), 2 * m + 1);
  const std::size_t size = msp.size();
  return {std::move(msp), std::move(g_map), size - 1, size};
}

DecompositionResult decompose(const SpanProgram& sp) {
  const std::size_t m = sp.num_inputs();
  if (m + 1 > kMaxTableInputs) {
    throw ValidationError("decompose: " + std::to_string(m) + " inputs is too many to verify exhaustively");
  }
  const SpanProgram extended = extend_with_and_bit(sp);
  DecompositionResult result = monotonize(extended);

  auto fail = [](const std::string& what) { throw InternalError("decomposition self-check failed: " + what); };
  if (result.msp_size != sp.size() + 1 || result.original_size != sp.size()) fail("size relation");
  if (!result.msp.is_monotone()) fail("msp is not monotone");
  if (result.g_map.size() != 2 * m + 1) fail("g has the wrong output length");
  for (std::size_t i = 0; i < m; ++i) {
    if (result.g_map[2 * i] != GBit{i + 1, false} || result.g_map[2 * i + 1] != GBit{i + 1, true}) {
      fail("g does not copy-and-negate bit " + std::to_string(i + 1));
    }
  }
  if (result.g_map.back() != GBit{m + 1, false}) fail("g does not pass b through");

  for (std::size_t idx = 0; idx < (std::size_t{1} << (m + 1)); ++idx) {
    const Bits zb = index_to_bits(idx, m + 1);
    const bool extended_value = evaluate(extended, zb);
    if (zb.back() == 1 && extended_value != evaluate(sp, std::span(zb).first(m))) fail("f'(z,1) != f(z)");
    if (evaluate(result.msp, apply_g(result.g_map, zb)) != extended_value) fail("f' != f_I o g");
  }
  if (2 * m + 1 <= kMaxTableInputs) {
    const auto check = check_indicator_validity(truth_table(result.msp));
    if (!check.valid) fail("f_I is not a valid indicator (" + check.witness->describe() + ")");
  }
  return result;
}

std::vector<std::string> library_names() { return {"AND", "OR", "XOR", "MAJ3", "EQ2"}; }

const SpanProgram& threshold23_program() {
  static const SpanProgram program(FieldMatrix(3, 2, {{0, 1}, {1, 1}, {2, 1}}), {{1, 1}, {2, 1}, {3, 1}}, {1, 0}, 3);
  return program;
}

SpanProgram library_program(std::string_view name) {
  if (name == "AND") {
    return SpanProgram(FieldMatrix(2, 2, {{1, 0}, {0, 1}}), {{1, 1}, {2, 1}}, {1, 1}, 2);
  }
  if (name == "OR") {
    return SpanProgram(FieldMatrix(2, 1, {{1}, {1}}), {{1, 1}, {2, 1}}, {1}, 2);
  }
  if (name == "XOR") {
    return SpanProgram(FieldMatrix(2, 2, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}), {{1, 1}, {1, 0}, {2, 1}, {2, 0}}, {1, 1},
                       2);
  }
  if (name == "MAJ3") {
    // Majority of three is the 2-of-3 threshold structure.
    const SpanProgram& t = threshold23_program();
    return SpanProgram(t.matrix(), {t.labels().begin(), t.labels().end()}, {t.target().begin(), t.target().end()}, 3);
  }
  if (name == "EQ2") {
    // (z1 == z3) AND (z2 == z4): two equality gadgets on disjoint column blocks.
    return SpanProgram(FieldMatrix(2, 4,
                                   {{1, 0, 0, 0},
                                    {0, 1, 0, 0},
                                    {0, 1, 0, 0},
                                    {1, 0, 0, 0},
                                    {0, 0, 1, 0},
                                    {0, 0, 0, 1},
                                    {0, 0, 0, 1},
                                    {0, 0, 1, 0}}),
                       {{1, 1}, {1, 0}, {3, 1}, {3, 0}, {2, 1}, {2, 0}, {4, 1}, {4, 0}}, {1, 1, 1, 1}, 4);
  }
  throw ValidationError("unknown library program '" + std::string(name) + "' (expected AND, OR, XOR, MAJ3 or EQ2)");
}

}  // namespace coderoute

#pragma once

// Brute-force reference implementations. They share no code with the
// library's elimination routines: span membership is decided by trying
// every coefficient vector.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coderoute/span_program.hpp"

namespace oracle {

using Row = std::vector<std::uint32_t>;

inline bool next_coefficients(std::vector<std::uint32_t>& c, std::uint32_t p) {
  for (auto& v : c) {
    if (++v < p) return true;
    v = 0;
  }
  return false;
}

inline Row combine(const std::vector<Row>& rows, const std::vector<std::uint32_t>& c, std::size_t cols,
                   std::uint32_t p) {
  Row out(cols, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < cols; ++k) out[k] = static_cast<std::uint32_t>((out[k] + std::uint64_t{c[i]} * rows[i][k]) % p);
  }
  return out;
}

/// Enumerates all p^d coefficient vectors.
inline bool in_span(const std::vector<Row>& rows, const Row& t, std::uint32_t p) {
  std::vector<std::uint32_t> c(rows.size(), 0);
  do {
    if (combine(rows, c, t.size(), p) == t) return true;
  } while (next_coefficients(c, p));
  return false;
}

inline bool independent(const std::vector<Row>& rows, std::size_t cols, std::uint32_t p) {
  std::vector<std::uint32_t> c(rows.size(), 0);
  const Row zero(cols, 0);
  while (next_coefficients(c, p)) {
    if (combine(rows, c, cols, p) == zero) return false;
  }
  return true;
}

/// Size of the largest independent subset of rows.
inline std::size_t rank(const std::vector<Row>& rows, std::size_t cols, std::uint32_t p) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << rows.size()); ++mask) {
    std::vector<Row> subset;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (mask >> i & 1u) subset.push_back(rows[i]);
    }
    if (subset.size() > best && independent(subset, cols, p)) best = subset.size();
  }
  return best;
}

inline std::vector<Row> rows_of(const coderoute::FieldMatrix& m) {
  std::vector<Row> rows;
  for (std::size_t r = 0; r < m.rows(); ++r) rows.emplace_back(m.row(r).begin(), m.row(r).end());
  return rows;
}

inline bool evaluate(const coderoute::SpanProgram& sp, const std::vector<std::uint8_t>& z) {
  std::vector<Row> active;
  const auto all = rows_of(sp.matrix());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& l = sp.labels()[i];
    if (z[l.input - 1] == l.epsilon) active.push_back(all[i]);
  }
  return in_span(active, Row(sp.target().begin(), sp.target().end()), sp.modulus());
}

inline std::vector<std::uint8_t> bits(std::size_t index, std::size_t n) {
  std::vector<std::uint8_t> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = (index >> (n - 1 - j)) & 1u;
  return z;
}

inline bool leq(std::size_t a, std::size_t b) { return (a & ~b) == 0; }

/// Checks every comparable pair and every complementary pair.
inline bool valid_indicator(const std::vector<std::uint8_t>& table) {
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = 0; b < table.size(); ++b) {
      if (leq(a, b) && table[a] > table[b]) return false;
    }
    if (table[a] && table[table.size() - 1 - a]) return false;
  }
  return true;
}

/// Is (first, second) a genuine witness against `table`?
inline bool witness_holds(const std::vector<std::uint8_t>& table, const coderoute::IndicatorViolation& w) {
  std::size_t a = 0;
  std::size_t b = 0;
  for (auto bit : w.first) a = a << 1 | bit;
  for (auto bit : w.second) b = b << 1 | bit;
  if (w.kind == coderoute::IndicatorViolationKind::NotMonotone) return leq(a, b) && table[a] == 1 && table[b] == 0;
  return b == table.size() - 1 - a && table[a] == 1 && table[b] == 1;
}

}  // namespace oracle

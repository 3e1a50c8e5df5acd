#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace coderoute {

using Scalar = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Arithmetic in Z_p for a prime p < 2^31.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p);

  std::uint32_t modulus() const { return p_; }
  Scalar add(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} + b) % p_); }
  Scalar sub(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} + p_ - b) % p_); }
  Scalar mul(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} * b) % p_); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar pow(Scalar a, std::uint64_t e) const;
  Scalar inv(Scalar a) const;  // a != 0
  Scalar reduce(std::int64_t v) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

/// Dense d x e matrix over Z_p. Every entry is kept reduced.
class FieldMatrix {
 public:
  FieldMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);
  FieldMatrix(std::uint32_t p, std::size_t cols, std::initializer_list<std::initializer_list<Scalar>> rows);
  FieldMatrix(std::uint32_t p, std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

  std::uint32_t modulus() const { return field_.modulus(); }
  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Scalar v);
  std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Scalar> values);
  FieldMatrix select_rows(std::span<const std::size_t> indices) const;
  FieldMatrix transpose() const;

  bool operator==(const FieldMatrix& other) const = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

struct RrefResult {
  FieldMatrix reduced;
  std::size_t rank;
};

/// Reduced row-echelon form (pivots normalised to 1, zero rows last).
RrefResult rref_rank(const FieldMatrix& m);

std::size_t rank(const FieldMatrix& m);

/// Outcome of a span-membership test together with the number of row
/// operations (scaled row subtractions) it performed.
struct SpanTest {
  bool member;
  std::size_t row_ops;
};

/// Is `target` a Z_p-combination of the rows of `rows`? The empty row set
/// spans only the zero vector. Throws ValidationError on length mismatch.
SpanTest span_membership(const FieldMatrix& rows, std::span<const Scalar> target);

bool in_span(const FieldMatrix& rows, std::span<const Scalar> target);

}  // namespace coderoute

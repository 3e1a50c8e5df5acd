#include "coderoute/field_matrix.hpp"

#include <string>
#include <utility>

#include "coderoute/errors.hpp"

namespace coderoute {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p)) {
    throw ValidationError("modulus " + std::to_string(p) + " is not a prime below 2^31");
  }
}

Scalar PrimeField::pow(Scalar a, std::uint64_t e) const {
  std::uint64_t result = 1 % p_;
  std::uint64_t base = a % p_;
  while (e > 0) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Scalar>(result);
}

Scalar PrimeField::inv(Scalar a) const {
  if (a % p_ == 0) throw InternalError("inverse of zero in Z_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

Scalar PrimeField::reduce(std::int64_t v) const {
  const auto p = static_cast<std::int64_t>(p_);
  return static_cast<Scalar>(((v % p) + p) % p);
}

FieldMatrix::FieldMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : field_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
  if (cols == 0) throw ValidationError("matrix must have at least one column");
}

FieldMatrix::FieldMatrix(std::uint32_t p, std::size_t cols,
                         std::initializer_list<std::initializer_list<Scalar>> rows)
    : FieldMatrix(p, 0, cols) {
  for (const auto& r : rows) {
    std::vector<Scalar> values(r);
    append_row(values);
  }
}

FieldMatrix::FieldMatrix(std::uint32_t p, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : field_(p), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (cols == 0) throw ValidationError("matrix must have at least one column");
  if (data_.size() != rows * cols) throw ValidationError("matrix entry count does not match its shape");
  for (Scalar v : data_) {
    if (v >= p) throw ValidationError("matrix entry " + std::to_string(v) + " not reduced mod " + std::to_string(p));
  }
}

void FieldMatrix::set(std::size_t r, std::size_t c, Scalar v) {
  if (v >= modulus()) throw ValidationError("matrix entry not reduced mod p");
  data_[r * cols_ + c] = v;
}

void FieldMatrix::append_row(std::span<const Scalar> values) {
  if (values.size() != cols_) {
    throw ValidationError("row has " + std::to_string(values.size()) + " entries, expected " + std::to_string(cols_));
  }
  for (Scalar v : values) {
    if (v >= modulus()) throw ValidationError("matrix entry not reduced mod p");
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> indices) const {
  FieldMatrix out(modulus(), 0, cols_);
  out.data_.reserve(indices.size() * cols_);
  for (std::size_t i : indices) {
    if (i >= rows_) throw ValidationError("row index out of range");
    out.append_row(row(i));
  }
  return out;
}

FieldMatrix FieldMatrix::transpose() const {
  if (rows_ == 0) throw ValidationError("cannot transpose a matrix with no rows");
  FieldMatrix out(modulus(), cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.data_[c * rows_ + r] = at(r, c);
  }
  return out;
}

RrefResult rref_rank(const FieldMatrix& m) {
  const PrimeField& f = m.field();
  std::vector<Scalar> a(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a[r * m.cols() + c] = m.at(r, c);
  }
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  auto entry = [&](std::size_t r, std::size_t c) -> Scalar& { return a[r * cols + c]; };

  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t sel = pivot_row;
    while (sel < rows && entry(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != pivot_row) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(entry(sel, k), entry(pivot_row, k));
    }
    const Scalar scale = f.inv(entry(pivot_row, c));
    for (std::size_t k = 0; k < cols; ++k) entry(pivot_row, k) = f.mul(entry(pivot_row, k), scale);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pivot_row || entry(r, c) == 0) continue;
      const Scalar factor = entry(r, c);
      for (std::size_t k = 0; k < cols; ++k) {
        entry(r, k) = f.sub(entry(r, k), f.mul(factor, entry(pivot_row, k)));
      }
    }
    ++pivot_row;
  }
  return {FieldMatrix(m.modulus(), rows, cols, std::move(a)), pivot_row};
}

std::size_t rank(const FieldMatrix& m) { return rref_rank(m).rank; }

namespace {

struct BasisVector {
  std::size_t pivot;
  std::vector<Scalar> values;
};

// Subtracts multiples of the basis from v until every basis pivot is zero.
std::size_t reduce_against(const PrimeField& f, const std::vector<BasisVector>& basis, std::vector<Scalar>& v) {
  std::size_t ops = 0;
  for (const auto& b : basis) {
    if (v[b.pivot] == 0) continue;
    const Scalar factor = f.mul(v[b.pivot], f.inv(b.values[b.pivot]));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = f.sub(v[k], f.mul(factor, b.values[k]));
    ++ops;
  }
  return ops;
}

}  // namespace

SpanTest span_membership(const FieldMatrix& rows, std::span<const Scalar> target) {
  if (target.size() != rows.cols()) {
    throw ValidationError("target has length " + std::to_string(target.size()) + " but rows have " +
                          std::to_string(rows.cols()) + " columns");
  }
  const PrimeField& f = rows.field();
  for (Scalar v : target) {
    if (v >= f.modulus()) throw ValidationError("target entry not reduced mod p");
  }

  std::vector<BasisVector> basis;
  std::size_t ops = 0;
  for (std::size_t r = 0; r < rows.rows() && basis.size() < rows.cols(); ++r) {
    std::vector<Scalar> v(rows.row(r).begin(), rows.row(r).end());
    ops += reduce_against(f, basis, v);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] != 0) {
        basis.push_back({k, std::move(v)});
        break;
      }
    }
  }
  std::vector<Scalar> t(target.begin(), target.end());
  ops += reduce_against(f, basis, t);
  bool zero = true;
  for (Scalar v : t) zero = zero && v == 0;
  return {zero, ops};
}

bool in_span(const FieldMatrix& rows, std::span<const Scalar> target) {
  return span_membership(rows, target).member;
}

}  // namespace coderoute

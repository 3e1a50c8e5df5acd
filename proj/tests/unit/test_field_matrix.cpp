#include <gtest/gtest.h>

#include <random>

#include "coderoute/errors.hpp"
#include "coderoute/field_matrix.hpp"
#include "support/oracles.hpp"

using namespace coderoute;

namespace {

FieldMatrix random_matrix(std::mt19937_64& rng, std::uint32_t p, std::size_t rows, std::size_t cols) {
  std::vector<Scalar> entries(rows * cols);
  for (auto& e : entries) e = static_cast<Scalar>(rng() % p);
  return FieldMatrix(p, rows, cols, entries);
}

}  // namespace

TEST(PrimeField, Inverses) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 101u, 2147483647u}) {
    PrimeField f(p);
    for (Scalar a : {1u, 2u % p ? 2u % p : 1u, p - 1}) EXPECT_EQ(f.mul(a, f.inv(a)), 1u) << p;
  }
  EXPECT_EQ(PrimeField(7).reduce(-1), 6u);
  EXPECT_EQ(PrimeField(5).pow(2, 4), 1u);
}

TEST(PrimeField, RejectsComposite) {
  EXPECT_THROW(PrimeField(4), ValidationError);
  EXPECT_THROW(PrimeField(1), ValidationError);
  EXPECT_THROW(PrimeField(0), ValidationError);
}

TEST(FieldMatrix, EntriesMustBeReduced) {
  EXPECT_THROW(FieldMatrix(3, 2, {{4, 5}, {3, 7}}), ValidationError);
  FieldMatrix m(3, 2, {{1, 2}, {0, 1}});
  EXPECT_EQ(m.transpose().at(1, 0), 2u);
  EXPECT_THROW(m.set(0, 0, 3), ValidationError);
}

TEST(FieldMatrix, AppendRowChecksWidth) {
  FieldMatrix m(5, 0, 3);
  std::vector<Scalar> ok{1, 2, 3};
  m.append_row(ok);
  EXPECT_EQ(m.rows(), 1u);
  std::vector<Scalar> bad{1, 2};
  EXPECT_THROW(m.append_row(bad), ValidationError);
}

TEST(FieldMatrix, RankMatchesSubsetOracle) {
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto m = random_matrix(rng, p, 1 + rng() % 4, 1 + rng() % 3);
      EXPECT_EQ(rank(m), oracle::rank(oracle::rows_of(m), m.cols(), p));
    }
  }
}

TEST(FieldMatrix, RrefIsReduced) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_matrix(rng, 5, 4, 4);
    const auto [r, k] = rref_rank(m);
    std::size_t col = 0;
    for (std::size_t i = 0; i < k; ++i) {
      while (r.at(i, col) == 0) ++col;
      EXPECT_EQ(r.at(i, col), 1u);
      for (std::size_t j = 0; j < r.rows(); ++j) {
        if (j != i) EXPECT_EQ(r.at(j, col), 0u);
      }
    }
    for (std::size_t i = k; i < r.rows(); ++i) {
      for (std::size_t c = 0; c < r.cols(); ++c) EXPECT_EQ(r.at(i, c), 0u);
    }
  }
}

TEST(SpanMembership, MatchesEnumeration) {
  std::mt19937_64 rng(3);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t cols = 1 + rng() % 3;
      const auto m = random_matrix(rng, p, rng() % 4, cols);
      std::vector<Scalar> t(cols);
      for (auto& v : t) v = static_cast<Scalar>(rng() % p);
      EXPECT_EQ(in_span(m, t), oracle::in_span(oracle::rows_of(m), oracle::Row(t.begin(), t.end()), p));
    }
  }
}

TEST(SpanMembership, EmptyRowsSpanOnlyZero) {
  FieldMatrix none(3, 0, 2);
  std::vector<Scalar> zero{0, 0};
  std::vector<Scalar> e1{1, 0};
  EXPECT_TRUE(in_span(none, zero));
  EXPECT_FALSE(in_span(none, e1));
}

TEST(SpanMembership, RowOpsBoundedBySquare) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = rng() % 6;
    const auto m = random_matrix(rng, 3, d, 3);
    std::vector<Scalar> t{1, 0, 2};
    EXPECT_LE(span_membership(m, t).row_ops, d * d + d);
  }
}

TEST(SpanMembership, LengthMismatch) {
  FieldMatrix m(2, 2, {{1, 0}});
  std::vector<Scalar> t{1};
  EXPECT_THROW(in_span(m, t), ValidationError);
}

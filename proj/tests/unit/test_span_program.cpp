#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "coderoute/errors.hpp"
#include "coderoute/random_tapes.hpp"
#include "coderoute/span_program.hpp"
#include "support/oracles.hpp"

using namespace coderoute;

TEST(Bits, ParseAndFormat) {
  EXPECT_EQ(parse_bits("0110"), (Bits{0, 1, 1, 0}));
  EXPECT_EQ(format_bits(Bits{1, 0}), "10");
  EXPECT_EQ(parse_bits(""), Bits{});
  EXPECT_THROW(parse_bits("012"), ValidationError);
  EXPECT_EQ(index_to_bits(5, 3), (Bits{1, 0, 1}));
  EXPECT_EQ(bits_to_index(Bits{1, 0, 1}), 5u);
}

TEST(SpanProgram, ConstructorValidates) {
  EXPECT_THROW(SpanProgram(FieldMatrix(2, 1, {{1}}), {{1, 1}, {2, 1}}, {1}, 2), ValidationError);
  EXPECT_THROW(SpanProgram(FieldMatrix(2, 1, {{1}}), {{3, 1}}, {1}, 2), ValidationError);
  EXPECT_THROW(SpanProgram(FieldMatrix(2, 1, {{1}}), {{0, 1}}, {1}, 2), ValidationError);
  EXPECT_THROW(SpanProgram(FieldMatrix(2, 1, {{1}}), {{1, 2}}, {1}, 2), ValidationError);
  EXPECT_THROW(SpanProgram(FieldMatrix(2, 1, {{1}}), {{1, 1}}, {1, 0}, 2), ValidationError);
}

TEST(SpanProgram, LibraryMatchesOracle) {
  for (const auto& name : library_names()) {
    const auto sp = library_program(name);
    const auto table = truth_table(sp);
    for (std::size_t i = 0; i < table.size(); ++i) {
      EXPECT_EQ(table[i], oracle::evaluate(sp, oracle::bits(i, sp.num_inputs()))) << name << " input " << i;
    }
  }
}

TEST(SpanProgram, LibraryTruthTables) {
  EXPECT_EQ(truth_table(library_program("AND")), (std::vector<std::uint8_t>{0, 0, 0, 1}));
  EXPECT_EQ(truth_table(library_program("OR")), (std::vector<std::uint8_t>{0, 1, 1, 1}));
  EXPECT_EQ(truth_table(library_program("XOR")), (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_EQ(truth_table(library_program("MAJ3")), (std::vector<std::uint8_t>{0, 0, 0, 1, 0, 1, 1, 1}));
  const auto eq = truth_table(library_program("EQ2"));
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(eq[i], (i >> 2) == (i & 3u)) << i;
  EXPECT_THROW(library_program("NAND"), ValidationError);
}

TEST(SpanProgram, ActivatedRows) {
  const auto xor_sp = library_program("XOR");
  EXPECT_EQ(activated_rows(xor_sp, Bits{1, 0}), (std::vector<std::size_t>{0, 3}));
  EXPECT_THROW(evaluate(xor_sp, Bits{1}), ValidationError);
}

TEST(Indicator, ValidityMatchesOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<std::uint8_t> table(std::size_t{1} << n);
    for (auto& v : table) v = rng() % 2;
    const auto check = check_indicator_validity(table);
    EXPECT_EQ(check.valid, oracle::valid_indicator(table));
    if (!check.valid) {
      ASSERT_TRUE(check.witness.has_value());
      EXPECT_TRUE(oracle::witness_holds(table, *check.witness));
    }
  }
}

TEST(Indicator, XorIsNotMonotone) {
  const auto check = check_indicator_validity(truth_table(library_program("XOR")));
  ASSERT_FALSE(check.valid);
  EXPECT_EQ(check.witness->kind, IndicatorViolationKind::NotMonotone);
}

TEST(Indicator, ConstantOneClones) {
  const std::vector<std::uint8_t> one{1, 1, 1, 1};
  const auto check = check_indicator_validity(one);
  ASSERT_FALSE(check.valid);
  EXPECT_EQ(check.witness->kind, IndicatorViolationKind::Cloning);
  EXPECT_TRUE(oracle::witness_holds(one, *check.witness));
}

TEST(Decompose, XorMatchesHandDerivation) {
  const auto result = decompose(library_program("XOR"));
  const FieldMatrix expected(2, 3, {{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(result.msp.matrix(), expected);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(result.msp.labels()[i], (RowLabel{i + 1, 1}));
  EXPECT_EQ(std::vector<Scalar>(result.msp.target().begin(), result.msp.target().end()),
            (std::vector<Scalar>{1, 1, 1}));
  const std::vector<GBit> g{{1, false}, {1, true}, {2, false}, {2, true}, {3, false}};
  EXPECT_EQ(result.g_map, g);
  EXPECT_EQ(result.original_size, 4u);
  EXPECT_EQ(result.msp_size, 5u);
}

TEST(Decompose, ComposesToAndBit) {
  for (const auto& name : library_names()) {
    const auto sp = library_program(name);
    const auto result = decompose(sp);
    EXPECT_TRUE(result.msp.is_monotone());
    EXPECT_EQ(result.msp_size, sp.size() + 1) << name;
    const std::size_t m = sp.num_inputs();
    for (std::size_t i = 0; i < (std::size_t{1} << (m + 1)); ++i) {
      const auto zb = oracle::bits(i, m + 1);
      const Bits z(zb.begin(), zb.end() - 1);
      const bool expect = oracle::evaluate(sp, z) && zb.back();
      EXPECT_EQ(oracle::evaluate(result.msp, apply_g(result.g_map, zb)), expect) << name << " " << i;
    }
  }
}

TEST(Decompose, IndicatorIsValid) {
  for (const auto& name : library_names()) {
    EXPECT_TRUE(oracle::valid_indicator(truth_table(decompose(library_program(name)).msp))) << name;
  }
}

TEST(Decompose, RandomPrograms) {
  std::mt19937_64 rng(23);
  for (std::uint32_t p : {2u, 3u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t m = 1 + rng() % 3;
      const std::size_t cols = 1 + rng() % 2;
      FieldMatrix mat(p, 0, cols);
      std::vector<RowLabel> labels;
      std::vector<Scalar> row(cols);
      const std::size_t rows = 1 + rng() % 5;
      for (std::size_t r = 0; r < rows; ++r) {
        for (auto& v : row) v = static_cast<Scalar>(rng() % p);
        mat.append_row(row);
        labels.push_back({1 + rng() % m, static_cast<std::uint8_t>(rng() % 2)});
      }
      std::vector<Scalar> target(cols, 0);
      target[0] = 1;
      const SpanProgram sp(mat, labels, target, m);
      const auto result = decompose(sp);
      EXPECT_EQ(result.msp_size, sp.size() + 1);
      for (std::size_t i = 0; i < (std::size_t{1} << (m + 1)); ++i) {
        const auto zb = oracle::bits(i, m + 1);
        const Bits z(zb.begin(), zb.end() - 1);
        EXPECT_EQ(evaluate(result.msp, apply_g(result.g_map, zb)), evaluate(sp, z) && zb.back());
      }
    }
  }
}

TEST(Threshold, TwoOfThree) {
  const auto table = truth_table(threshold23_program());
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(table[i], std::popcount(i) >= 2) << i;
}

TEST(RandomIndicator, ProducesValidCodes) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t shares = 2 + trial % 2;
    const auto sp = random_indicator_program(rng, shares);
    EXPECT_EQ(sp.modulus(), 3u);
    EXPECT_TRUE(sp.is_monotone());
    for (std::size_t k = 1; k <= shares; ++k) EXPECT_GE(sp.rows_for_input(k), 1u);
    const auto table = truth_table(sp);
    EXPECT_TRUE(oracle::valid_indicator(table));
    EXPECT_EQ(table.back(), 1);
  }
}

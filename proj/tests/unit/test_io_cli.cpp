#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "coderoute/cli.hpp"
#include "coderoute/compilers.hpp"
#include "coderoute/errors.hpp"
#include "coderoute/io.hpp"
#include "coderoute/random_tapes.hpp"

using namespace coderoute;

namespace {

const std::filesystem::path kData = CODEROUTE_TEST_DATA;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (kData / name).string(); }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "coderoute_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Json, SpanProgramRoundTrip) {
  for (const auto& name : library_names()) {
    const auto sp = library_program(name);
    EXPECT_EQ(span_program_from_json(span_program_to_json(sp)), sp) << name;
  }
}

TEST(Json, SpanProgramRejectsUnknownKeys) {
  EXPECT_THROW(span_program_from_json(R"({"p":2,"num_inputs":1,"target":[1],"rows":[],"extra":1})"),
               ValidationError);
  EXPECT_THROW(span_program_from_json("{"), ValidationError);
  EXPECT_THROW(span_program_from_json(R"({"p":4,"num_inputs":1,"target":[1],"rows":[]})"), ValidationError);
}

TEST(Json, DecompositionRoundTrip) {
  const auto result = decompose(library_program("XOR"));
  const auto loaded = load_program_file(decomposition_to_json(result));
  EXPECT_EQ(loaded.program, result.msp);
  ASSERT_TRUE(loaded.decomposition);
  EXPECT_EQ(loaded.decomposition->g_map, result.g_map);
  EXPECT_FALSE(load_program_file(span_program_to_json(result.msp)).decomposition);
}

TEST(Json, TapeRoundTrip) {
  auto corpus = random_tape_corpus(kDefaultSeed, 30);
  corpus.push_back(compile_garden_hose_example(GardenHoseFunction::Or, 0, 0));
  const std::vector<BitRef> two{BitRef::input(Side::Left, 1), BitRef::input(Side::Right, 1, true)};
  corpus.push_back(compile_theorem1_indicator(library_program("AND"), two));
  for (const auto& tape : corpus) EXPECT_EQ(tape_from_json(tape_to_json(tape)), tape);
}

TEST(Json, TapeRejectsStrayFields) {
  auto text = tape_to_json(example_and_tape());
  const auto at = text.find("\"kind\": \"unit-route\"");
  ASSERT_NE(at, std::string::npos);
  text.insert(at, "\"to\": \"left\", ");
  EXPECT_THROW(tape_from_json(text), ValidationError);
}

TEST(Files, MissingFile) { EXPECT_THROW(read_text_file(kData / "nope.json"), std::runtime_error); }

TEST(Cli, SpTable) {
  const auto r = cli({"sp", "table", data("xor.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "00 0\n01 1\n10 1\n11 0\n");
}

TEST(Cli, SpEval) {
  EXPECT_EQ(cli({"sp", "eval", data("xor.json"), "--input", "10"}).out, "1\n");
  EXPECT_EQ(cli({"sp", "eval", data("xor.json"), "--input", "101"}).code, 2);
}

TEST(Cli, SpDecompose) {
  const auto out = scratch("xor_msp.json");
  const auto r = cli({"sp", "decompose", data("xor.json"), "-o", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "original_size=4 msp_size=5 inputs=5 g=(z1,!z1,z2,!z2,z3)\n");
  EXPECT_TRUE(load_program_file(read_text_file(out)).decomposition.has_value());
}

TEST(Cli, TapeCostGolden) {
  const auto r = cli({"tape", "cost", data("and_formula.json"), "--x", "1", "--y", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "E=1 H=3 H~=3\n");
}

TEST(Cli, TapeEvalEvaluatorsAgree) {
  for (const char* x : {"0", "1"}) {
    for (const char* y : {"0", "1"}) {
      const auto a = cli({"tape", "eval", data("nested_formula.json"), "--x", x, "--y", y});
      const auto b = cli({"tape", "eval", data("nested_formula.json"), "--x", x, "--y", y, "--evaluator", "modp",
                          "--p", "5"});
      const auto c =
          cli({"tape", "eval", data("nested_formula.json"), "--x", x, "--y", y, "--evaluator", "depthfirst"});
      ASSERT_EQ(a.code, 0) << a.err;
      EXPECT_EQ(a.out.substr(0, 8), b.out.substr(0, 8));
      EXPECT_EQ(a.out.substr(0, 8), c.out.substr(0, 8));
      EXPECT_NE(b.out.find("evaluator=modp p=5"), std::string::npos);
    }
  }
}

TEST(Cli, CompileRoundTrip) {
  const auto out = scratch("xor_t2.json");
  const auto r = cli({"compile", "theorem2", data("xor.json"), "--left", "1", "--right", "1", "-o", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("wrote ", 0), 0u);
  EXPECT_NO_THROW(validate_and_build_tree(tape_from_json(read_text_file(out))));
}

TEST(Cli, IndicatorRejectionExitsWithValidation) {
  const auto r = cli({"compile", "indicator", data("xor.json"), "--bits", "x1,y1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("invalid indicator"), std::string::npos) << r.err;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"sp", "table", data("missing.json")}).code, 1);
  EXPECT_EQ(cli({"tape", "eval", data("and_formula.json"), "--x", "1", "--y", "1", "--evaluator", "modp", "--p",
                 "6"})
                .code,
            2);
  const std::vector<std::string> smith{"compile", "indicator", data("and_span.json"), "--bits", "x1,y1", "-o",
                                       scratch("and_smith.json").string()};
  ASSERT_EQ(cli(smith).code, 0);
  EXPECT_EQ(cli({"qsim", "run", scratch("and_smith.json").string(), "--x", "1", "--y", "1"}).code, 3);
}

TEST(Cli, QsimSweep) {
  const auto r = cli({"qsim", "sweep", data("and_formula.json"), "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 4u);
  EXPECT_EQ(r.out.find("\"success_prob\": 0"), std::string::npos);
}

TEST(Cli, Bench) {
  const auto r = cli({"bench", "library"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("XOR"), std::string::npos);
}

TEST(Bench, Rows) {
  const auto rows = bench_library();
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.msp_size, row.span_size + 1) << row.name;
    EXPECT_LE(row.e_general, static_cast<long long>(2 * row.msp_size + 1)) << row.name;
  }
  EXPECT_EQ(rows[2].name, "XOR");
  EXPECT_EQ(rows[2].e_general, 2);
  EXPECT_EQ(rows[0].e_garden_hose, 2);
  EXPECT_EQ(rows[1].e_garden_hose, 3);
}

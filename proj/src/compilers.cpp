#include "coderoute/compilers.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace coderoute {

namespace {

class FormulaCompiler {
 public:
  explicit FormulaCompiler(ProtocolTape& tape) : tape_(tape) {}

  void compile(const Formula& f, const std::string& share) {
    if (f.op == Formula::Op::Leaf) {
      tape_.records.push_back({share, {}, UnitRoute{f.literal}});
      return;
    }
    const std::string extra = fresh();
    const std::string a = fresh();
    const std::string b = fresh();
    tape_.records.push_back({share, {extra, a, b}, Encode{CodeSpec::threshold23()}});
    // Everything is encoded on the left, so "sent across" means to the right.
    if (f.op == Formula::Op::Or) tape_.records.push_back({extra, {}, UnitRoute{BitRef::constant(Side::Right)}});
    compile(f.children[0], a);
    compile(f.children[1], b);
  }

 private:
  std::string fresh() { return "s" + std::to_string(++counter_); }

  ProtocolTape& tape_;
  std::size_t counter_ = 0;
};

}  // namespace

ProtocolTape compile_formula(const Formula& f) {
  ProtocolTape tape;
  tape.base = 3;
  tape.left_bits = f.left_bits();
  tape.right_bits = f.right_bits();
  FormulaCompiler(tape).compile(f, tape.root.id);
  return tape;
}

ProtocolTape compile_theorem1_indicator(const SpanProgram& msp, std::span<const BitRef> assignment) {
  if (assignment.size() != msp.num_inputs()) {
    throw ValidationError("indicator program has " + std::to_string(msp.num_inputs()) + " shares but " +
                          std::to_string(assignment.size()) + " routing bits were assigned");
  }
  const auto check = check_indicator_validity(truth_table(msp));
  if (!check.valid) throw IndicatorError(*check.witness);
  if (!msp.is_monotone()) {
    throw ValidationError("indicator protocol needs a monotone span program (a row has epsilon 0)");
  }

  ProtocolTape tape;
  tape.base = msp.modulus();
  std::vector<std::string> shares;
  for (std::size_t i = 1; i <= assignment.size(); ++i) shares.push_back("S" + std::to_string(i));
  tape.records.push_back({tape.root.id, shares, Encode{CodeSpec::smith(msp)}});
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const BitRef& bit = assignment[i];
    if (!bit.is_constant()) {
      auto& len = bit.side == Side::Left ? tape.left_bits : tape.right_bits;
      len = std::max(len, bit.index);
    }
    tape.records.push_back({shares[i], {}, UnitRoute{bit}});
  }
  return tape;
}

ProtocolTape compile_theorem2(const SpanProgram& sp, std::size_t alpha_len, std::size_t beta_len) {
  if (alpha_len + beta_len != sp.num_inputs()) {
    throw ValidationError("split " + std::to_string(alpha_len) + "+" + std::to_string(beta_len) +
                          " does not cover the program's " + std::to_string(sp.num_inputs()) + " inputs");
  }
  const DecompositionResult dec = decompose(sp);

  ProtocolTape tape;
  tape.base = sp.modulus();
  tape.left_bits = alpha_len;
  tape.right_bits = beta_len;
  std::vector<std::string> shares;
  for (std::size_t i = 1; i <= dec.g_map.size(); ++i) shares.push_back("S" + std::to_string(i));
  tape.records.push_back({tape.root.id, shares, Encode{CodeSpec::smith(dec.msp)}});

  const std::size_t b_source = sp.num_inputs() + 1;
  for (std::size_t i = 0; i < dec.g_map.size(); ++i) {
    const GBit& g = dec.g_map[i];
    BitRef bit;
    if (g.source == b_source) {
      bit = BitRef::constant(Side::Right);
    } else if (g.source <= alpha_len) {
      bit = BitRef::input(Side::Left, g.source, g.negated);
    } else {
      bit = BitRef::input(Side::Right, g.source - alpha_len, g.negated);
    }
    tape.records.push_back({shares[i], {}, UnitRoute{bit}});
  }
  return tape;
}

GardenHoseFunction parse_garden_hose_function(std::string_view name) {
  if (name == "AND") return GardenHoseFunction::And;
  if (name == "OR") return GardenHoseFunction::Or;
  throw ValidationError("garden-hose examples exist for AND and OR only, got '" + std::string(name) + "'");
}

ProtocolTape compile_garden_hose_example(GardenHoseFunction f, std::uint8_t x, std::uint8_t y) {
  if (x > 1 || y > 1) throw ValidationError("garden-hose inputs are single bits");
  ProtocolTape tape;
  tape.base = 2;
  tape.left_bits = 1;
  tape.right_bits = 1;
  const std::string& q = tape.root.id;
  auto teleport = [&](const std::string& in, const std::string& out, Side to) {
    tape.records.push_back({in, {out}, Teleport{to}});
  };

  if (f == GardenHoseFunction::And) {
    // Two pairs. Alice_0 sends Q through the first iff x = 1; Alice_1 sends
    // it back through the second iff y = 0.
    if (x == 0) {
      tape.records.push_back({q, {}, UnitRoute{BitRef::constant(Side::Left)}});
      tape.idle_epr_pairs = 2;
    } else if (y == 1) {
      teleport(q, "w1", Side::Right);
      tape.idle_epr_pairs = 1;
    } else {
      teleport(q, "w1", Side::Right);
      teleport("w1", "w2", Side::Left);
    }
    return tape;
  }

  // Three pairs. x = 1 sends Q right through pair 1; otherwise through pair
  // 2, after which Alice_1 keeps it iff y = 1 and returns it via pair 3.
  teleport(q, "w1", Side::Right);
  if (x == 1 || y == 1) {
    tape.idle_epr_pairs = 2;
  } else {
    teleport("w1", "w2", Side::Left);
    tape.idle_epr_pairs = 1;
  }
  return tape;
}

ProtocolTape example_and_tape() { return compile_formula(parse_formula("AND(x1,y1)")); }
ProtocolTape example_or_tape() { return compile_formula(parse_formula("OR(x1,y1)")); }
ProtocolTape example_nested_tape() { return compile_formula(parse_formula("AND(NOT(x1),OR(x1,y1))")); }

}  // namespace coderoute

#include "coderoute/formula.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "coderoute/errors.hpp"

namespace coderoute {

Formula Formula::leaf(BitRef literal) {
  Formula f;
  f.literal = literal;
  return f;
}

Formula Formula::conj(Formula a, Formula b) {
  Formula f;
  f.op = Op::And;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  return f;
}

Formula Formula::disj(Formula a, Formula b) {
  Formula f = conj(std::move(a), std::move(b));
  f.op = Op::Or;
  return f;
}

std::size_t Formula::size() const {
  if (op == Op::Leaf) return 1;
  return children[0].size() + children[1].size();
}

namespace {

std::size_t max_index(const Formula& f, Side side) {
  if (f.op == Formula::Op::Leaf) return f.literal.side == side ? f.literal.index : 0;
  return std::max(max_index(f.children[0], side), max_index(f.children[1], side));
}

}  // namespace

std::size_t Formula::left_bits() const { return max_index(*this, Side::Left); }
std::size_t Formula::right_bits() const { return max_index(*this, Side::Right); }

bool Formula::evaluate(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const {
  switch (op) {
    case Op::Leaf:
      return literal.resolve(x, y) == 1;
    case Op::And:
      return children[0].evaluate(x, y) && children[1].evaluate(x, y);
    case Op::Or:
      return children[0].evaluate(x, y) || children[1].evaluate(x, y);
  }
  return false;
}

std::string Formula::to_string() const {
  if (op == Op::Leaf) {
    const std::string var = (literal.side == Side::Left ? "x" : "y") + std::to_string(literal.index);
    return literal.negated ? "NOT(" + var + ")" : var;
  }
  return std::string(op == Op::And ? "AND(" : "OR(") + children[0].to_string() + "," + children[1].to_string() + ")";
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = expr(false);
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("formula syntax error at position " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // `negate` carries the parity of enclosing NOTs, so De Morgan is applied on the way down.
  Formula expr(bool negate) {
    skip_space();
    const std::size_t start = pos_;
    const std::string w = word();
    if (w.empty()) fail("expected AND, OR, NOT or a variable");
    if (w == "NOT") {
      expect('(');
      Formula inner = expr(!negate);
      expect(')');
      return inner;
    }
    if (w == "AND" || w == "OR") {
      expect('(');
      Formula a = expr(negate);
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ',') fail(w + " takes exactly two arguments");
      ++pos_;
      Formula b = expr(negate);
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail(w + " takes exactly two arguments");
      ++pos_;
      const bool is_and = (w == "AND") != negate;
      return is_and ? Formula::conj(std::move(a), std::move(b)) : Formula::disj(std::move(a), std::move(b));
    }
    if ((w[0] == 'x' || w[0] == 'y') && w.size() > 1 &&
        std::all_of(w.begin() + 1, w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (w.size() > 6) {
        pos_ = start;
        fail("variable index too large in '" + w + "'");
      }
      const std::size_t index = std::stoul(w.substr(1));
      if (index == 0) {
        pos_ = start;
        fail("variables are numbered from 1, got '" + w + "'");
      }
      return Formula::leaf(BitRef::input(w[0] == 'x' ? Side::Left : Side::Right, index, negate));
    }
    pos_ = start;
    fail("unknown name '" + w + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

}  // namespace coderoute

#include "coderoute/evaluators.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "coderoute/errors.hpp"

namespace coderoute {

namespace {

const CodeSpec& code_of(const ShareRecord& rec) { return std::get<Encode>(rec.op).code; }

class OwnerWalker {
 public:
  OwnerWalker(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y)
      : tree_(tree), x_(x), y_(y) {}

  std::uint8_t owner(std::size_t s) {
    const ShareNode& node = tree_.share(s);
    if (!node.consumer) return side_bit(node.holder);
    const std::size_t r = *node.consumer;
    const ShareRecord& rec = tree_.record(r);
    const auto& outs = tree_.links(r).outputs;
    switch (rec.kind()) {
      case RecordKind::UnitRoute:
        return std::get<UnitRoute>(rec.op).bit.resolve(x_, y_);
      case RecordKind::Teleport:
        return owner(outs[0]);
      case RecordKind::Encode:
        break;
    }
    const SpanProgram& access = code_of(rec).access_program();
    std::vector<std::uint8_t> right(outs.size());
    std::size_t n_tilde = 0;
    for (std::size_t j = 0; j < outs.size(); ++j) {
      right[j] = owner(outs[j]);
      n_tilde += static_cast<std::size_t>(tree_.share(outs[j]).log_dim);
    }
    // Monotone program: the activated rows are those of right-held shares.
    const auto rows = activated_rows(access, right);
    const SpanTest test = span_membership(access.matrix().select_rows(rows), access.target());
    row_ops += test.row_ops;
    bound += n_tilde * n_tilde;
    if (row_ops > bound) {
      throw InternalError("span-membership work " + std::to_string(row_ops) + " exceeds the bound " +
                          std::to_string(bound));
    }
    return test.member ? 1 : 0;
  }

  std::size_t row_ops = 0;
  std::size_t bound = 0;

 private:
  const ProtocolTree& tree_;
  std::span<const std::uint8_t> x_;
  std::span<const std::uint8_t> y_;
};

class ModpWalker {
 public:
  ModpWalker(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
             std::uint32_t p, std::size_t cap)
      : tree_(tree), x_(x), y_(y), field_(p), cap_(cap) {}

  Scalar value(std::size_t s) {
    const ShareNode& node = tree_.share(s);
    if (!node.consumer) return side_bit(node.holder);
    const std::size_t r = *node.consumer;
    const ShareRecord& rec = tree_.record(r);
    const auto& outs = tree_.links(r).outputs;
    switch (rec.kind()) {
      case RecordKind::UnitRoute:
        return std::get<UnitRoute>(rec.op).bit.resolve(x_, y_);
      case RecordKind::Teleport:
        return value(outs[0]);
      case RecordKind::Encode:
        break;
    }
    if (outs.size() > cap_) {
      throw CapabilityError("record " + std::to_string(r + 1) + " (input '" + rec.input + "') has " +
                            std::to_string(outs.size()) + " shares, above the fan-in cap of " +
                            std::to_string(cap_));
    }
    std::vector<Scalar> values;
    values.reserve(outs.size());
    for (std::size_t o : outs) values.push_back(value(o));
    return multilinear_extension(truth_table(code_of(rec).access_program()), values, field_);
  }

 private:
  const ProtocolTree& tree_;
  std::span<const std::uint8_t> x_;
  std::span<const std::uint8_t> y_;
  PrimeField field_;
  std::size_t cap_;
};

}  // namespace

OwnerResult get_owner(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) {
  tree.check_inputs(x, y);
  OwnerWalker walker(tree, x, y);
  const std::uint8_t owner = walker.owner(ProtocolTree::root());
  return {owner, walker.row_ops, walker.bound};
}

Scalar multilinear_extension(std::span<const std::uint8_t> table, std::span<const Scalar> values,
                             const PrimeField& f) {
  const std::size_t k = values.size();
  if (table.size() != (std::size_t{1} << k)) throw ValidationError("truth table does not match the argument count");
  Scalar sum = 0;
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    if (!table[idx]) continue;
    Scalar term = 1;
    for (std::size_t j = 0; j < k && term != 0; ++j) {
      const bool zj = (idx >> (k - 1 - j)) & 1u;
      const Scalar a = values[j] % f.modulus();
      term = f.mul(term, zj ? a : f.sub(1, a));
    }
    sum = f.add(sum, term);
  }
  return sum;
}

std::uint8_t eval_modp(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
                       std::uint32_t p, std::size_t fan_in_cap) {
  tree.check_inputs(x, y);
  ModpWalker walker(tree, x, y, p, fan_in_cap);
  const Scalar v = walker.value(ProtocolTree::root());
  if (v > 1) throw InternalError("mod-" + std::to_string(p) + " evaluation produced the non-Boolean value " +
                                 std::to_string(v));
  return static_cast<std::uint8_t>(v);
}

std::pair<Scalar, Scalar> lemma3_transform(std::uint64_t f0, std::uint64_t f0bar, std::uint32_t p) {
  const PrimeField f(p);
  const Scalar f1 = f.pow(static_cast<Scalar>(f0 % p), p - 1);
  const Scalar f2 = f1;
  const auto scaled_bar = static_cast<Scalar>((static_cast<unsigned __int128>(p) * f0bar) % p);
  const Scalar f2bar = f.add(f.add(1, f.mul(p - 1, f1)), scaled_bar);
  return {f2, f2bar};
}

namespace {

// Everything here is recomputed from the tape and R; nothing remembers the
// path that led to the current share.
class PruningView {
 public:
  PruningView(const ProtocolTree& tree, const OverrideSet& r, std::span<const std::uint8_t> x,
              std::span<const std::uint8_t> y)
      : tree_(tree), r_(r), x_(x), y_(y) {}

  // Outputs of s in the effective tree (empty for leaves).
  std::span<const std::size_t> children(std::size_t s) const {
    if (r_.contains(s)) return {};
    const auto& c = tree_.share(s).consumer;
    if (!c) return {};
    return tree_.links(*c).outputs;
  }

  // A share is a leaf when it is overridden, unit-routed or kept, or when it
  // is teleported along a chain that ends in one of those.
  bool is_leaf(std::size_t s) const { return leaf_end(s).has_value(); }

  std::uint8_t leaf_value(std::size_t s) const {
    const std::size_t end = *leaf_end(s);
    if (const auto it = r_.find(end); it != r_.end()) return it->second;
    const ShareNode& node = tree_.share(end);
    if (!node.consumer) return side_bit(node.holder);
    return std::get<UnitRoute>(tree_.record(*node.consumer).op).bit.resolve(x_, y_);
  }

  std::optional<std::size_t> parent(std::size_t s) const {
    const auto& p = tree_.share(s).producer;
    if (!p) return std::nullopt;
    return tree_.links(*p).input;
  }

  // Height of the effective subtree at s, by a traversal that moves with
  // parent and sibling lookups instead of a stack.
  std::size_t layer(std::size_t s) const {
    std::size_t depth = 0;
    std::size_t best = 0;
    std::size_t u = s;
    while (true) {
      if (!is_leaf(u)) {
        u = children(u)[0];
        best = std::max(best, ++depth);
        continue;
      }
      while (true) {
        if (u == s) return best;
        const std::size_t p = *parent(u);
        const auto siblings = children(p);
        std::size_t j = 0;
        while (siblings[j] != u) ++j;
        if (j + 1 < siblings.size()) {
          u = siblings[j + 1];
          break;
        }
        u = p;
        --depth;
      }
    }
  }

  // Value of s once all of its children are leaves.
  std::uint8_t collapse_value(std::size_t s) const {
    const std::size_t r = *tree_.share(s).consumer;
    const ShareRecord& rec = tree_.record(r);
    const auto outs = children(s);
    if (rec.kind() == RecordKind::Teleport) return leaf_value(outs[0]);
    std::vector<std::uint8_t> right(outs.size());
    for (std::size_t j = 0; j < outs.size(); ++j) right[j] = leaf_value(outs[j]);
    return evaluate(code_of(rec).access_program(), right) ? 1 : 0;
  }

 private:
  std::optional<std::size_t> leaf_end(std::size_t s) const {
    while (true) {
      if (r_.contains(s)) return s;
      const auto& c = tree_.share(s).consumer;
      if (!c) return s;
      const auto& outs = tree_.links(*c).outputs;
      if (outs.empty()) return s;
      if (tree_.record(*c).kind() != RecordKind::Teleport) return std::nullopt;
      s = outs[0];
    }
  }

  const ProtocolTree& tree_;
  const OverrideSet& r_;
  std::span<const std::uint8_t> x_;
  std::span<const std::uint8_t> y_;
};

}  // namespace

DepthFirstResult eval_depth_first(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                                  std::span<const std::uint8_t> y, const DepthFirstOptions& options) {
  tree.check_inputs(x, y);
  for (std::size_t r = 0; r < tree.record_count(); ++r) {
    const std::size_t arity = tree.links(r).outputs.size();
    if (arity > options.arity_bound) {
      throw CapabilityError("record " + std::to_string(r + 1) + " (input '" + tree.record(r).input +
                            "') encodes into " + std::to_string(arity) + " shares; the depth-first evaluator " +
                            "is limited to " + std::to_string(options.arity_bound));
    }
  }

  OverrideSet overrides;
  const PruningView view(tree, overrides, x, y);
  DepthFirstResult result{0, 0, 0, 0};
  std::size_t v = ProtocolTree::root();
  if (view.is_leaf(v)) {
    result.owner = view.leaf_value(v);
    return result;
  }
  while (true) {
    ++result.steps;
    const auto kids = view.children(v);
    bool all_leaves = true;
    for (std::size_t w : kids) all_leaves = all_leaves && view.is_leaf(w);

    if (all_leaves) {
      const std::uint8_t value = view.collapse_value(v);
      for (std::size_t w : kids) overrides.erase(w);
      overrides[v] = value;
      ++result.prunes;
      result.peak_overrides = std::max(result.peak_overrides, overrides.size());
      if (options.trace) options.trace({v, true, overrides});
      const auto up = view.parent(v);
      if (!up) {
        result.owner = value;
        return result;
      }
      v = *up;
    } else {
      std::optional<std::size_t> next;
      std::size_t best = 0;
      for (std::size_t w : kids) {
        if (view.is_leaf(w)) continue;
        const std::size_t layer = view.layer(w);
        if (!next || layer > best) {
          next = w;
          best = layer;
        }
      }
      v = *next;
      if (options.trace) options.trace({v, false, overrides});
    }
  }
}

namespace {

bool below_override(const ProtocolTree& tree, const OverrideSet& overrides, std::size_t s) {
  auto p = tree.share(s).producer;
  while (p) {
    const std::size_t up = tree.links(*p).input;
    if (overrides.contains(up)) return true;
    p = tree.share(up).producer;
  }
  return false;
}

}  // namespace

ProtocolTape effective_tape(const ProtocolTree& tree, const OverrideSet& overrides) {
  ProtocolTape tape = tree.tape();
  tape.records.clear();
  for (std::size_t r = 0; r < tree.record_count(); ++r) {
    const std::size_t in = tree.links(r).input;
    if (below_override(tree, overrides, in)) continue;
    if (const auto it = overrides.find(in); it != overrides.end()) {
      tape.records.push_back({tree.record(r).input, {}, UnitRoute{BitRef::constant(side_from_bit(it->second))}});
    } else {
      tape.records.push_back(tree.record(r));
    }
  }
  return tape;
}

std::size_t effective_size(const ProtocolTree& tree, const OverrideSet& overrides) {
  std::size_t count = 0;
  for (std::size_t s = 0; s < tree.share_count(); ++s) count += below_override(tree, overrides, s) ? 0 : 1;
  return count;
}

}  // namespace coderoute

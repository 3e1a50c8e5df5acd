#include "coderoute/protocol.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "coderoute/errors.hpp"

namespace coderoute {

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Side parse_side(std::string_view text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  throw ValidationError("side must be 'left' or 'right', got '" + std::string(text) + "'");
}

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::UnitRoute:
      return "unit-route";
    case RecordKind::Teleport:
      return "teleport";
    case RecordKind::Encode:
      return "encode";
  }
  return "?";
}

std::uint8_t BitRef::resolve(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const {
  if (is_constant()) return side_bit(side);
  const auto bits = side == Side::Left ? x : y;
  if (index > bits.size()) throw ValidationError("bit reference " + describe() + " is outside the input string");
  const std::uint8_t bit = bits[index - 1];
  return negated ? static_cast<std::uint8_t>(1 - bit) : bit;
}

std::string BitRef::describe() const {
  if (is_constant()) return std::string("const->") + std::string(to_string(side));
  return std::string(negated ? "!" : "") + (side == Side::Left ? "x" : "y") + std::to_string(index);
}

const SpanProgram& CodeSpec::access_program() const {
  if (variant == Variant::Threshold23) return threshold23_program();
  if (!msp) throw ValidationError("smith code without a span program");
  return *msp;
}

std::size_t CodeSpec::share_count() const {
  return variant == Variant::Threshold23 ? 3 : access_program().num_inputs();
}

std::vector<int> CodeSpec::share_log_dims() const {
  if (variant == Variant::Threshold23) return {1, 1, 1};
  const SpanProgram& sp = access_program();
  std::vector<int> dims(sp.num_inputs());
  for (std::size_t i = 0; i < dims.size(); ++i) dims[i] = static_cast<int>(sp.rows_for_input(i + 1));
  return dims;
}

int CodeSpec::total_size() const {
  const auto dims = share_log_dims();
  return std::accumulate(dims.begin(), dims.end(), 0);
}

std::optional<std::size_t> ProtocolTree::find_share(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const ShareRecord* ProtocolTree::consumer_record(std::size_t s) const {
  const auto& c = shares_[s].consumer;
  return c ? &tape_.records[*c] : nullptr;
}

std::size_t ProtocolTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root(), 0}};
  while (!stack.empty()) {
    const auto [s, d] = stack.back();
    stack.pop_back();
    const auto& consumer = shares_[s].consumer;
    if (!consumer) {
      best = std::max(best, d);
      continue;
    }
    const auto& outs = links_[*consumer].outputs;
    if (outs.empty()) best = std::max(best, d + 1);
    for (std::size_t o : outs) stack.emplace_back(o, d + 1);
  }
  return best;
}

void ProtocolTree::check_inputs(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const {
  if (x.size() != tape_.left_bits || y.size() != tape_.right_bits) {
    throw ValidationError("tape expects " + std::to_string(tape_.left_bits) + " left and " +
                          std::to_string(tape_.right_bits) + " right bits, got " + std::to_string(x.size()) +
                          " and " + std::to_string(y.size()));
  }
  const auto binary = [](std::uint8_t b) { return b <= 1; };
  if (!std::all_of(x.begin(), x.end(), binary) || !std::all_of(y.begin(), y.end(), binary)) {
    throw ValidationError("input bits must be 0 or 1");
  }
}

namespace {

[[noreturn]] void record_error(std::size_t r, const ShareRecord& rec, const std::string& what) {
  throw ValidationError("record " + std::to_string(r + 1) + " (input '" + rec.input + "'): " + what);
}

void check_record_shape(const ProtocolTape& tape, std::size_t r) {
  const ShareRecord& rec = tape.records[r];
  const std::size_t n = rec.outputs.size();
  switch (rec.kind()) {
    case RecordKind::UnitRoute: {
      if (n != 0) record_error(r, rec, "a unit-route must have no outputs");
      const BitRef& bit = std::get<UnitRoute>(rec.op).bit;
      const std::size_t limit = bit.side == Side::Left ? tape.left_bits : tape.right_bits;
      if (!bit.is_constant() && bit.index > limit) {
        record_error(r, rec, "bit " + bit.describe() + " exceeds the declared " +
                                 std::string(to_string(bit.side)) + " input length " + std::to_string(limit));
      }
      break;
    }
    case RecordKind::Teleport:
      if (n != 1) record_error(r, rec, "a teleport must have exactly one output");
      break;
    case RecordKind::Encode: {
      if (n < 2) record_error(r, rec, "an encode must have at least two outputs");
      const CodeSpec& code = std::get<Encode>(rec.op).code;
      if (code.variant == CodeSpec::Variant::Threshold23) {
        if (tape.base != 3) record_error(r, rec, "threshold23 shares are qutrits but the tape base is " +
                                                      std::to_string(tape.base));
      } else {
        if (!code.msp) record_error(r, rec, "smith code needs a span program");
        if (!code.msp->is_monotone()) record_error(r, rec, "smith code span program must be monotone");
        if (code.msp->modulus() != tape.base) {
          record_error(r, rec, "smith code over Z_" + std::to_string(code.msp->modulus()) +
                                   " does not match tape base " + std::to_string(tape.base));
        }
      }
      if (code.share_count() != n) {
        record_error(r, rec, "code has " + std::to_string(code.share_count()) + " shares but the record lists " +
                                 std::to_string(n) + " outputs");
      }
      break;
    }
  }
}

}  // namespace

ProtocolTree validate_and_build_tree(ProtocolTape tape) {
  if (tape.base < 2 || !is_prime(tape.base)) {
    throw ValidationError("tape base " + std::to_string(tape.base) + " must be prime");
  }
  if (tape.root.id.empty()) throw ValidationError("root share needs an identifier");
  if (tape.root.log_dim < 1) throw ValidationError("root log-dimension must be at least 1");

  ProtocolTree tree;
  tree.shares_.push_back({tape.root.id, tape.root.log_dim, Side::Left, std::nullopt, std::nullopt});
  tree.index_.emplace(tape.root.id, 0);

  for (std::size_t r = 0; r < tape.records.size(); ++r) {
    check_record_shape(tape, r);
    for (const auto& out : tape.records[r].outputs) {
      if (out.empty()) record_error(r, tape.records[r], "empty output identifier");
      if (!tree.index_.emplace(out, tree.shares_.size()).second) {
        record_error(r, tape.records[r], "share '" + out + "' is produced more than once");
      }
      tree.shares_.push_back({out, 0, Side::Left, r, std::nullopt});
    }
  }

  tree.links_.resize(tape.records.size());
  for (std::size_t r = 0; r < tape.records.size(); ++r) {
    const ShareRecord& rec = tape.records[r];
    const auto it = tree.index_.find(rec.input);
    if (it == tree.index_.end()) record_error(r, rec, "consumes share '" + rec.input + "' that nothing produces");
    auto& node = tree.shares_[it->second];
    if (node.consumer) {
      record_error(r, rec, "share '" + rec.input + "' is already consumed by record " +
                               std::to_string(*node.consumer + 1));
    }
    node.consumer = r;
    tree.links_[r].input = it->second;
    for (const auto& out : rec.outputs) tree.links_[r].outputs.push_back(tree.index_.at(out));
  }
  if (!tree.shares_[0].consumer) throw ValidationError("root share '" + tape.root.id + "' is never consumed");

  // Walk from the root, fixing holders and log-dimensions.
  std::vector<bool> reached(tape.records.size(), false);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    const auto& consumer = tree.shares_[s].consumer;
    if (!consumer) continue;
    const std::size_t r = *consumer;
    reached[r] = true;
    const ShareRecord& rec = tape.records[r];
    const ShareNode parent = tree.shares_[s];
    const auto& outs = tree.links_[r].outputs;
    if (rec.kind() == RecordKind::Teleport) {
      const Side to = std::get<Teleport>(rec.op).to;
      if (to == parent.holder) {
        record_error(r, rec, "teleport to the " + std::string(to_string(to)) + " side, where the share already is");
      }
      tree.shares_[outs[0]].holder = to;
      tree.shares_[outs[0]].log_dim = parent.log_dim;
    } else if (rec.kind() == RecordKind::Encode) {
      if (parent.log_dim != 1) record_error(r, rec, "codes encode a single qudit; the input has log-dimension " +
                                                        std::to_string(parent.log_dim));
      const auto dims = std::get<Encode>(rec.op).code.share_log_dims();
      for (std::size_t j = 0; j < outs.size(); ++j) {
        tree.shares_[outs[j]].holder = parent.holder;
        tree.shares_[outs[j]].log_dim = dims[j];
      }
    }
    for (std::size_t o : outs) queue.push_back(o);
  }
  for (std::size_t r = 0; r < tape.records.size(); ++r) {
    if (!reached[r]) record_error(r, tape.records[r], "is part of a cycle unreachable from the root");
  }

  tree.tape_ = std::move(tape);
  return tree;
}

long long size_h(const ProtocolTree& tree) {
  long long h = 1;
  for (std::size_t r = 0; r < tree.record_count(); ++r) {
    const auto n = static_cast<long long>(tree.links(r).outputs.size());
    if (n > 1) h += n - 1;
    if (n == 1) h += 1;
  }
  return h;
}

long long weighted_size(const ProtocolTree& tree) {
  long long h = tree.share(ProtocolTree::root()).log_dim;
  for (std::size_t r = 0; r < tree.record_count(); ++r) {
    const auto& links = tree.links(r);
    long long out = 0;
    for (std::size_t o : links.outputs) out += tree.share(o).log_dim;
    if (links.outputs.size() > 1) h += out - tree.share(links.input).log_dim;
    if (links.outputs.size() == 1) h += out;
  }
  return h;
}

long long entanglement_cost(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                            std::span<const std::uint8_t> y) {
  tree.check_inputs(x, y);
  auto cost = static_cast<long long>(tree.tape().idle_epr_pairs);
  for (std::size_t r = 0; r < tree.record_count(); ++r) {
    const ShareRecord& rec = tree.record(r);
    const ShareNode& in = tree.share(tree.links(r).input);
    if (rec.kind() == RecordKind::Teleport) {
      cost += in.log_dim;
    } else if (rec.kind() == RecordKind::UnitRoute) {
      const BitRef& bit = std::get<UnitRoute>(rec.op).bit;
      if (!bit.is_constant() && bit.side != in.holder) cost += in.log_dim;
    }
  }
  return cost;
}

}  // namespace coderoute

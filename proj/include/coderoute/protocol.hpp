#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "coderoute/span_program.hpp"

namespace coderoute {

enum class Side : std::uint8_t { Left = 0, Right = 1 };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
inline Side side_from_bit(std::uint8_t bit) { return bit ? Side::Right : Side::Left; }
inline std::uint8_t side_bit(Side s) { return s == Side::Right ? 1 : 0; }
std::string_view to_string(Side s);
Side parse_side(std::string_view text);

/// The bit a unit-routing is conditioned on: input bit `index` (1-based) of
/// the string received on `side`, optionally negated. Index 0 marks a
/// constant, which sends the share straight to `side`.
struct BitRef {
  Side side = Side::Left;
  std::size_t index = 0;
  bool negated = false;

  static BitRef input(Side side, std::size_t index, bool negated = false) { return {side, index, negated}; }
  static BitRef constant(Side destination) { return {destination, 0, false}; }

  bool is_constant() const { return index == 0; }
  std::uint8_t resolve(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const;
  std::string describe() const;

  bool operator==(const BitRef&) const = default;
};

/// A quantum secret sharing scheme, described by its access structure.
struct CodeSpec {
  enum class Variant { Threshold23, Smith };

  Variant variant = Variant::Threshold23;
  std::optional<SpanProgram> msp;  // Smith only: monotone program, one input per share

  static CodeSpec threshold23() { return {Variant::Threshold23, std::nullopt}; }
  static CodeSpec smith(SpanProgram msp) { return {Variant::Smith, std::move(msp)}; }

  /// Monotone program whose input i is "share i is on the right".
  const SpanProgram& access_program() const;
  std::size_t share_count() const;
  /// Log (base k) dimension of each share. A Smith share carries one qudit
  /// per program row labelled with it.
  std::vector<int> share_log_dims() const;
  /// Sum of the share log-dimensions.
  int total_size() const;

  bool operator==(const CodeSpec&) const = default;
};

struct UnitRoute {
  BitRef bit;
  bool operator==(const UnitRoute&) const = default;
};
struct Teleport {
  Side to;
  bool operator==(const Teleport&) const = default;
};
struct Encode {
  CodeSpec code;
  bool operator==(const Encode&) const = default;
};

enum class RecordKind { UnitRoute, Teleport, Encode };
std::string_view to_string(RecordKind kind);

/// One step of a protocol: share `input` is unit-routed (no outputs),
/// teleported (one output) or encoded (several outputs).
struct ShareRecord {
  std::string input;
  std::vector<std::string> outputs;
  std::variant<UnitRoute, Teleport, Encode> op;

  RecordKind kind() const { return static_cast<RecordKind>(op.index()); }
  bool operator==(const ShareRecord&) const = default;
};

struct RootShare {
  std::string id = "Q";
  int log_dim = 1;
  bool operator==(const RootShare&) const = default;
};

struct ProtocolTape {
  std::uint32_t base = 2;
  std::size_t left_bits = 0;
  std::size_t right_bits = 0;
  RootShare root;
  std::vector<ShareRecord> records;
  /// Pre-shared EPR pairs that no record routes through. Garden-hose
  /// strategies pay for their whole resource state whatever the inputs.
  std::size_t idle_epr_pairs = 0;

  bool operator==(const ProtocolTape&) const = default;
};

struct ShareNode {
  std::string id;
  int log_dim = 1;
  Side holder = Side::Left;  // where the share sits once produced
  std::optional<std::size_t> producer;
  std::optional<std::size_t> consumer;  // empty for kept shares
};

struct RecordLinks {
  std::size_t input;
  std::vector<std::size_t> outputs;
};

/// A structurally validated tape. Shares are numbered with the root first.
class ProtocolTree {
 public:
  const ProtocolTape& tape() const { return tape_; }
  std::uint32_t base() const { return tape_.base; }

  static constexpr std::size_t root() { return 0; }
  std::size_t share_count() const { return shares_.size(); }
  const ShareNode& share(std::size_t s) const { return shares_[s]; }
  std::optional<std::size_t> find_share(std::string_view id) const;

  std::size_t record_count() const { return links_.size(); }
  const ShareRecord& record(std::size_t r) const { return tape_.records[r]; }
  const RecordLinks& links(std::size_t r) const { return links_[r]; }

  /// Record consuming share s, if any.
  const ShareRecord* consumer_record(std::size_t s) const;
  /// Longest path (in records) from the root to a leaf.
  std::size_t depth() const;

  void check_inputs(std::span<const std::uint8_t> x, std::span<const std::uint8_t> y) const;

 private:
  friend ProtocolTree validate_and_build_tree(ProtocolTape tape);

  ProtocolTape tape_;
  std::vector<ShareNode> shares_;
  std::vector<RecordLinks> links_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Checks the tape and builds its tree. Throws ValidationError naming the
/// offending record on dangling or doubly-consumed shares, cycles, arity
/// mismatches, out-of-range bits and codes the tape base cannot carry.
ProtocolTree validate_and_build_tree(ProtocolTape tape);

/// Number of shares that are unit-routed or teleported.
long long size_h(const ProtocolTree& tree);
/// Total log-dimension of the shares counted by size_h.
long long weighted_size(const ProtocolTree& tree);
/// EPR pairs (of base-k qudits) consumed on inputs (x, y).
long long entanglement_cost(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                            std::span<const std::uint8_t> y);

}  // namespace coderoute

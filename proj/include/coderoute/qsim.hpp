#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coderoute/protocol.hpp"

namespace coderoute {

using Complex = std::complex<double>;

enum class Holder { Left, Right, Verifier };
Holder holder_of(Side side);
std::string_view to_string(Holder h);

inline constexpr std::size_t kDefaultRegisterCap = 12;

/// Dense state of a register of base-k qudits. Qudits are addressed by
/// handles that stay valid until the qudit is measured.
class PureState {
 public:
  using Qudit = std::size_t;

  explicit PureState(std::uint32_t base, std::size_t max_qudits = kDefaultRegisterCap);

  std::uint32_t base() const { return base_; }
  std::size_t qudit_count() const { return order_.size(); }
  std::size_t peak_qudits() const { return peak_; }
  std::span<const Complex> amplitudes() const { return amps_; }

  /// Appends a qudit in |0>, or in the given single-qudit state.
  Qudit add_qudit(Holder holder);
  Qudit add_qudit(Holder holder, std::span<const Complex> state);

  bool contains(Qudit q) const;
  Holder holder(Qudit q) const;
  void set_holder(Qudit q, Holder h);
  std::vector<Qudit> held_by(Holder h) const;

  /// k x k unitary on one qudit.
  void apply(Qudit q, const Eigen::MatrixXcd& u);
  /// target <- target + c * control (mod k).
  void add_multiple(Qudit target, Qudit control, std::uint32_t c);
  /// target <- c * target (mod k), c invertible.
  void multiply(Qudit target, std::uint32_t c);
  void shift(Qudit q, std::uint32_t a);  // X^a
  void phase(Qudit q, std::uint32_t b);  // Z^b
  void fourier(Qudit q);

  double probability(Qudit q, std::uint32_t outcome) const;
  /// Computational-basis measurement; the qudit leaves the register.
  std::uint32_t measure(Qudit q, std::mt19937_64& rng);
  std::uint32_t measure_forced(Qudit q, std::uint32_t outcome);

  double norm() const;
  Eigen::MatrixXcd reduced_density(std::span<const Qudit> keep) const;
  /// || (<Psi+|_{a,b} (x) I) psi ||^2.
  double epr_overlap(Qudit a, Qudit b) const;

 private:
  std::size_t position(Qudit q) const;
  std::size_t stride(std::size_t pos) const;
  void remove_after_collapse(Qudit q, std::uint32_t outcome);

  std::uint32_t base_;
  std::size_t max_qudits_;
  std::vector<Complex> amps_;
  std::vector<Qudit> order_;  // order_[pos] = handle; position pos has stride k^pos
  std::vector<Holder> holders_;  // by position
  Qudit next_handle_ = 0;
  std::size_t peak_ = 0;
};

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

struct EprPair {
  PureState::Qudit near;
  PureState::Qudit far;
};
/// (1/sqrt k) sum_t |t, t>.
EprPair make_epr(PureState& state, Holder near_side, Holder far_side);

struct BellOutcome {
  std::uint32_t a;
  std::uint32_t b;
};
/// Bell measurement of (source, pair.near). The far half is left holding
/// X^a Z^b applied to the source state. Source and near half must be held
/// by the same party.
BellOutcome teleport(PureState& state, PureState::Qudit source, const EprPair& pair, std::mt19937_64& rng);
BellOutcome teleport_forced(PureState& state, PureState::Qudit source, const EprPair& pair, BellOutcome outcome);
void pauli_correct(PureState& state, PureState::Qudit q, BellOutcome outcome);

/// |s> -> (1/sqrt 3) sum_t |t, t+s, t+2s>. The secret qudit becomes share 2.
std::array<PureState::Qudit, 3> encode_threshold23(PureState& state, PureState::Qudit secret);
/// Recovers the secret from shares i != j (0-based) into one of them and
/// returns its handle. The two leftover share qudits end up in a fixed
/// maximally entangled state.
PureState::Qudit decode_threshold23(PureState& state, PureState::Qudit share_i, std::size_t i,
                                    PureState::Qudit share_j, std::size_t j);

struct QsimOptions {
  std::uint64_t seed = 20240611;
  std::size_t max_qudits = kDefaultRegisterCap;
};

struct QuantumReport {
  Bits x;
  Bits y;
  std::uint8_t owner;  // side on which the simulation recovered Q
  double success_prob;
  double wrong_side_trace_distance;
  long long epr_pairs_used;
};

/// Runs the tape as a one-round protocol with Q maximally entangled with a
/// verifier reference, decodes on the side that can recover Q and projects
/// onto the original maximally entangled state. Decoupling of the other
/// side is checked by rerunning with two random pure secrets and identical
/// measurement outcomes. Smith codes and encodes of already-teleported
/// shares raise CapabilityError.
QuantumReport run_quantum_tape(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                               std::span<const std::uint8_t> y, const QsimOptions& options = {});

std::string report_to_json(const QuantumReport& report);

}  // namespace coderoute

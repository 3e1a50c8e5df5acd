#include "coderoute/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>

#include "coderoute/errors.hpp"
#include "coderoute/evaluators.hpp"

namespace coderoute {

Holder holder_of(Side side) { return side == Side::Left ? Holder::Left : Holder::Right; }

std::string_view to_string(Holder h) {
  switch (h) {
    case Holder::Left:
      return "left";
    case Holder::Right:
      return "right";
    case Holder::Verifier:
      return "verifier";
  }
  return "?";
}

PureState::PureState(std::uint32_t base, std::size_t max_qudits)
    : base_(base), max_qudits_(max_qudits), amps_{Complex(1.0, 0.0)} {
  if (base < 2) throw ValidationError("qudit dimension must be at least 2");
}

std::size_t PureState::position(Qudit q) const {
  const auto it = std::find(order_.begin(), order_.end(), q);
  if (it == order_.end()) throw ValidationError("qudit " + std::to_string(q) + " is not in the register");
  return static_cast<std::size_t>(it - order_.begin());
}

std::size_t PureState::stride(std::size_t pos) const {
  std::size_t s = 1;
  for (std::size_t i = 0; i < pos; ++i) s *= base_;
  return s;
}

PureState::Qudit PureState::add_qudit(Holder holder) {
  std::vector<Complex> zero(base_, Complex(0.0, 0.0));
  zero[0] = 1.0;
  return add_qudit(holder, zero);
}

PureState::Qudit PureState::add_qudit(Holder holder, std::span<const Complex> state) {
  if (state.size() != base_) throw ValidationError("single-qudit state has the wrong dimension");
  if (order_.size() + 1 > max_qudits_) {
    throw CapabilityError("simulation needs more than " + std::to_string(max_qudits_) + " live qudits");
  }
  const std::size_t old = amps_.size();
  std::vector<Complex> next(old * base_);
  for (std::size_t j = 0; j < base_; ++j) {
    for (std::size_t i = 0; i < old; ++i) next[i + j * old] = amps_[i] * state[j];
  }
  amps_ = std::move(next);
  order_.push_back(next_handle_);
  holders_.push_back(holder);
  peak_ = std::max(peak_, order_.size());
  return next_handle_++;
}

bool PureState::contains(Qudit q) const { return std::find(order_.begin(), order_.end(), q) != order_.end(); }

Holder PureState::holder(Qudit q) const { return holders_[position(q)]; }

void PureState::set_holder(Qudit q, Holder h) { holders_[position(q)] = h; }

std::vector<PureState::Qudit> PureState::held_by(Holder h) const {
  std::vector<Qudit> out;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (holders_[i] == h) out.push_back(order_[i]);
  }
  return out;
}

void PureState::apply(Qudit q, const Eigen::MatrixXcd& u) {
  const std::size_t k = base_;
  if (static_cast<std::size_t>(u.rows()) != k || static_cast<std::size_t>(u.cols()) != k) {
    throw ValidationError("gate dimension does not match the qudit");
  }
  const std::size_t s = stride(position(q));
  Eigen::VectorXcd v(k);
  for (std::size_t outer = 0; outer < amps_.size(); outer += s * k) {
    for (std::size_t inner = 0; inner < s; ++inner) {
      const std::size_t idx = outer + inner;
      for (std::size_t m = 0; m < k; ++m) v[m] = amps_[idx + m * s];
      const Eigen::VectorXcd w = u * v;
      for (std::size_t m = 0; m < k; ++m) amps_[idx + m * s] = w[m];
    }
  }
}

void PureState::add_multiple(Qudit target, Qudit control, std::uint32_t c) {
  const std::size_t ts = stride(position(target));
  const std::size_t cs = stride(position(control));
  if (ts == cs) throw ValidationError("controlled addition needs two distinct qudits");
  std::vector<Complex> next(amps_.size());
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const std::size_t t = (idx / ts) % base_;
    const std::size_t ctl = (idx / cs) % base_;
    const std::size_t nt = (t + std::size_t{c} * ctl) % base_;
    next[idx + nt * ts - t * ts] = amps_[idx];
  }
  amps_ = std::move(next);
}

void PureState::multiply(Qudit target, std::uint32_t c) {
  if (c % base_ == 0) throw ValidationError("multiplying a qudit by zero is not unitary");
  const std::size_t ts = stride(position(target));
  std::vector<Complex> next(amps_.size());
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const std::size_t t = (idx / ts) % base_;
    const std::size_t nt = (t * c) % base_;
    next[idx + nt * ts - t * ts] = amps_[idx];
  }
  amps_ = std::move(next);
}

void PureState::shift(Qudit q, std::uint32_t a) {
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(base_, base_);
  for (std::size_t j = 0; j < base_; ++j) x((j + a) % base_, j) = 1.0;
  apply(q, x);
}

void PureState::phase(Qudit q, std::uint32_t b) {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(base_, base_);
  for (std::size_t j = 0; j < base_; ++j) {
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((b * j) % base_) / base_);
  }
  apply(q, z);
}

void PureState::fourier(Qudit q) {
  Eigen::MatrixXcd f(base_, base_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(base_));
  for (std::size_t m = 0; m < base_; ++m) {
    for (std::size_t j = 0; j < base_; ++j) {
      f(m, j) = std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>((m * j) % base_) / base_);
    }
  }
  apply(q, f);
}

double PureState::probability(Qudit q, std::uint32_t outcome) const {
  const std::size_t s = stride(position(q));
  double p = 0.0;
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    if ((idx / s) % base_ == outcome) p += std::norm(amps_[idx]);
  }
  return p;
}

std::uint32_t PureState::measure(Qudit q, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::uint32_t outcome = base_ - 1;
  for (std::uint32_t m = 0; m < base_; ++m) {
    const double p = probability(q, m);
    acc += p;
    if (u < acc && p > 0.0) {
      outcome = m;
      break;
    }
  }
  while (probability(q, outcome) <= 0.0 && outcome > 0) --outcome;
  remove_after_collapse(q, outcome);
  return outcome;
}

std::uint32_t PureState::measure_forced(Qudit q, std::uint32_t outcome) {
  if (outcome >= base_) throw ValidationError("measurement outcome out of range");
  if (probability(q, outcome) < 1e-14) throw InternalError("forced a measurement outcome of probability zero");
  remove_after_collapse(q, outcome);
  return outcome;
}

void PureState::remove_after_collapse(Qudit q, std::uint32_t outcome) {
  const std::size_t pos = position(q);
  const std::size_t s = stride(pos);
  std::vector<Complex> next(amps_.size() / base_);
  double total = 0.0;
  for (std::size_t low = 0; low < s; ++low) {
    for (std::size_t high = 0; high < next.size() / s; ++high) {
      const Complex a = amps_[low + outcome * s + high * s * base_];
      next[low + high * s] = a;
      total += std::norm(a);
    }
  }
  const double scale = 1.0 / std::sqrt(total);
  for (auto& a : next) a *= scale;
  amps_ = std::move(next);
  order_.erase(order_.begin() + static_cast<std::ptrdiff_t>(pos));
  holders_.erase(holders_.begin() + static_cast<std::ptrdiff_t>(pos));
}

double PureState::norm() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return std::sqrt(total);
}

Eigen::MatrixXcd PureState::reduced_density(std::span<const Qudit> keep) const {
  std::vector<std::size_t> keep_pos;
  for (Qudit q : keep) keep_pos.push_back(position(q));
  std::vector<std::size_t> rest_pos;
  for (std::size_t p = 0; p < order_.size(); ++p) {
    if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end()) rest_pos.push_back(p);
  }
  std::size_t dk = 1;
  for (std::size_t i = 0; i < keep_pos.size(); ++i) dk *= base_;
  const std::size_t dr = amps_.size() / dk;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
  std::vector<std::size_t> digits(order_.size());
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    std::size_t rem = idx;
    for (std::size_t p = 0; p < order_.size(); ++p) {
      digits[p] = rem % base_;
      rem /= base_;
    }
    std::size_t ki = 0;
    for (std::size_t t = keep_pos.size(); t-- > 0;) ki = ki * base_ + digits[keep_pos[t]];
    std::size_t ri = 0;
    for (std::size_t t = rest_pos.size(); t-- > 0;) ri = ri * base_ + digits[rest_pos[t]];
    a(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(ri)) = amps_[idx];
  }
  return a * a.adjoint();
}

double PureState::epr_overlap(Qudit qa, Qudit qb) const {
  const std::size_t sa = stride(position(qa));
  const std::size_t sb = stride(position(qb));
  if (sa == sb) throw ValidationError("overlap needs two distinct qudits");
  std::vector<Complex> projected(amps_.size(), Complex(0.0, 0.0));
  const double scale = 1.0 / std::sqrt(static_cast<double>(base_));
  for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
    const std::size_t da = (idx / sa) % base_;
    const std::size_t db = (idx / sb) % base_;
    if (da != db) continue;
    projected[idx - da * sa - db * sb] += amps_[idx] * scale;
  }
  double total = 0.0;
  for (const auto& v : projected) total += std::norm(v);
  return total;
}

double trace_distance(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw ValidationError("trace distance between states of different dimensions");
  }
  if (rho.size() == 0) return 0.0;
  const Eigen::MatrixXcd diff = rho - sigma;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

EprPair make_epr(PureState& state, Holder near_side, Holder far_side) {
  const auto near = state.add_qudit(near_side);
  const auto far = state.add_qudit(far_side);
  state.fourier(near);
  state.add_multiple(far, near, 1);
  return {near, far};
}

namespace {

void prepare_bell_measurement(PureState& state, PureState::Qudit source, const EprPair& pair) {
  if (state.holder(source) != state.holder(pair.near)) {
    throw ValidationError("cannot Bell-measure a " + std::string(to_string(state.holder(source))) +
                          " qudit together with a " + std::string(to_string(state.holder(pair.near))) + " qudit");
  }
  state.add_multiple(pair.near, source, state.base() - 1);
}

}  // namespace

BellOutcome teleport(PureState& state, PureState::Qudit source, const EprPair& pair, std::mt19937_64& rng) {
  prepare_bell_measurement(state, source, pair);
  const std::uint32_t a = state.measure(pair.near, rng);
  state.fourier(source);
  const std::uint32_t b = state.measure(source, rng);
  return {a, b};
}

BellOutcome teleport_forced(PureState& state, PureState::Qudit source, const EprPair& pair, BellOutcome outcome) {
  prepare_bell_measurement(state, source, pair);
  state.measure_forced(pair.near, outcome.a);
  state.fourier(source);
  state.measure_forced(source, outcome.b);
  return outcome;
}

void pauli_correct(PureState& state, PureState::Qudit q, BellOutcome outcome) {
  const std::uint32_t k = state.base();
  state.shift(q, (k - outcome.a % k) % k);
  state.phase(q, (k - outcome.b % k) % k);
}

std::array<PureState::Qudit, 3> encode_threshold23(PureState& state, PureState::Qudit secret) {
  if (state.base() != 3) throw ValidationError("the 2-of-3 code acts on qutrits");
  const Holder h = state.holder(secret);
  const auto a1 = state.add_qudit(h);
  const auto a2 = state.add_qudit(h);
  state.fourier(a1);
  state.add_multiple(a2, a1, 1);
  state.add_multiple(a2, secret, 2);
  state.add_multiple(secret, a1, 1);
  return {a1, secret, a2};
}

PureState::Qudit decode_threshold23(PureState& state, PureState::Qudit share_i, std::size_t i,
                                    PureState::Qudit share_j, std::size_t j) {
  if (state.base() != 3) throw ValidationError("the 2-of-3 code acts on qutrits");
  if (i == j || i > 2 || j > 2) throw ValidationError("decoding needs two distinct share indices in {0,1,2}");
  const PrimeField f(3);
  const auto ci = static_cast<Scalar>(i);
  const auto cj = static_cast<Scalar>(j);
  const auto cl = static_cast<Scalar>(3 - i - j);
  state.add_multiple(share_j, share_i, 2);
  state.multiply(share_j, f.inv(f.sub(cj, ci)));
  state.add_multiple(share_i, share_j, f.sub(cl, ci));
  return share_j;
}

namespace {

using Qudit = PureState::Qudit;

// One execution of a tape. Measurement outcomes are either sampled (and
// recorded) or replayed from an earlier run.
class TapeRun {
 public:
  TapeRun(const ProtocolTree& tree, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y,
          std::size_t max_qudits)
      : state(tree.base(), max_qudits), tree_(tree), x_(x), y_(y), carrier_(tree.share_count()),
        location_(tree.share_count()), pending_(tree.share_count()) {}

  void execute_sampled(Qudit q, std::mt19937_64& rng) {
    rng_ = &rng;
    execute(q);
  }

  void execute_replayed(Qudit q, const std::vector<BellOutcome>& outcomes) {
    replay_ = &outcomes;
    execute(q);
  }

  std::optional<Side> winner() const {
    const bool left = recoverable(ProtocolTree::root(), Side::Left);
    const bool right = recoverable(ProtocolTree::root(), Side::Right);
    if (left == right) return std::nullopt;
    return left ? Side::Left : Side::Right;
  }

  Qudit decode_on(std::size_t s, Side side) {
    const ShareNode& node = tree_.share(s);
    if (!node.consumer) return *carrier_[s];
    const std::size_t r = *node.consumer;
    const auto& outs = tree_.links(r).outputs;
    switch (tree_.record(r).kind()) {
      case RecordKind::UnitRoute:
        return *carrier_[s];
      case RecordKind::Teleport:
        return decode_on(outs[0], side);
      case RecordKind::Encode:
        break;
    }
    std::vector<std::size_t> usable;
    for (std::size_t j = 0; j < outs.size() && usable.size() < 2; ++j) {
      if (recoverable(outs[j], side)) usable.push_back(j);
    }
    if (usable.size() < 2) throw InternalError("decoding a share that is not recoverable on this side");
    const Qudit qi = decode_on(outs[usable[0]], side);
    const Qudit qj = decode_on(outs[usable[1]], side);
    return decode_threshold23(state, qi, usable[0], qj, usable[1]);
  }

  PureState state;
  std::vector<BellOutcome> outcomes;
  std::size_t epr_pairs = 0;

 private:
  void execute(Qudit root_qudit) {
    visit(ProtocolTree::root(), root_qudit, Side::Left);
    // The round: every leaf reaches its destination, then the pending
    // Pauli corrections are undone, latest first.
    for (std::size_t s = 0; s < tree_.share_count(); ++s) {
      if (!carrier_[s]) continue;
      state.set_holder(*carrier_[s], holder_of(location_[s]));
      for (auto it = pending_[s].rbegin(); it != pending_[s].rend(); ++it) pauli_correct(state, *carrier_[s], *it);
    }
  }

  Qudit send_across(Qudit q, Side from, std::vector<BellOutcome>& pending) {
    const EprPair pair = make_epr(state, holder_of(from), holder_of(opposite(from)));
    ++epr_pairs;
    BellOutcome o;
    if (replay_) {
      if (next_outcome_ >= replay_->size()) throw InternalError("replayed run needs more outcomes than recorded");
      o = teleport_forced(state, q, pair, (*replay_)[next_outcome_++]);
    } else {
      o = teleport(state, q, pair, *rng_);
    }
    outcomes.push_back(o);
    pending.push_back(o);
    return pair.far;
  }

  [[noreturn]] void not_realizable(std::size_t r, const std::string& why) const {
    throw CapabilityError("record " + std::to_string(r + 1) + " (input '" + tree_.record(r).input + "'): " + why);
  }

  void visit(std::size_t s, Qudit q, Side holder) {
    const ShareNode& node = tree_.share(s);
    if (node.log_dim != 1) {
      throw CapabilityError("share '" + node.id + "' spans " + std::to_string(node.log_dim) +
                            " qudits; the simulator routes single qudits only");
    }
    if (!node.consumer) {
      carrier_[s] = q;
      location_[s] = holder;
      return;
    }
    const std::size_t r = *node.consumer;
    const ShareRecord& rec = tree_.record(r);
    const auto& outs = tree_.links(r).outputs;
    switch (rec.kind()) {
      case RecordKind::UnitRoute: {
        const BitRef& bit = std::get<UnitRoute>(rec.op).bit;
        if (!bit.is_constant() && bit.side != holder) q = send_across(q, holder, pending_[s]);
        carrier_[s] = q;
        location_[s] = side_from_bit(bit.resolve(x_, y_));
        return;
      }
      case RecordKind::Teleport: {
        const Side to = std::get<Teleport>(rec.op).to;
        const Qudit far = send_across(q, holder, pending_[s]);
        pending_[outs[0]] = pending_[s];
        pending_[s].clear();
        visit(outs[0], far, to);
        return;
      }
      case RecordKind::Encode:
        break;
    }
    const CodeSpec& code = std::get<Encode>(rec.op).code;
    if (code.variant != CodeSpec::Variant::Threshold23) {
      not_realizable(r, "Smith codes are checked classically only and cannot be simulated");
    }
    if (!pending_[s].empty()) {
      not_realizable(r, "encodes a share teleported before the round, so its Pauli correction would have to "
                        "pass through the code");
    }
    const auto shares = encode_threshold23(state, q);
    for (std::size_t j = 0; j < outs.size(); ++j) visit(outs[j], shares[j], holder);
  }

  bool recoverable(std::size_t s, Side side) const {
    const ShareNode& node = tree_.share(s);
    if (carrier_[s]) return location_[s] == side;
    const std::size_t r = *node.consumer;
    const auto& outs = tree_.links(r).outputs;
    if (tree_.record(r).kind() == RecordKind::Teleport) return recoverable(outs[0], side);
    std::size_t count = 0;
    for (std::size_t o : outs) count += recoverable(o, side) ? 1 : 0;
    return count >= 2;
  }

  const ProtocolTree& tree_;
  std::span<const std::uint8_t> x_;
  std::span<const std::uint8_t> y_;
  std::vector<std::optional<Qudit>> carrier_;  // leaf shares only
  std::vector<Side> location_;
  std::vector<std::vector<BellOutcome>> pending_;
  std::mt19937_64* rng_ = nullptr;
  const std::vector<BellOutcome>* replay_ = nullptr;
  std::size_t next_outcome_ = 0;
};

std::vector<Complex> random_qudit_state(std::uint32_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<Complex> v(k);
  double total = 0.0;
  for (auto& c : v) {
    c = {gauss(rng), gauss(rng)};
    total += std::norm(c);
  }
  for (auto& c : v) c /= std::sqrt(total);
  return v;
}

}  // namespace

QuantumReport run_quantum_tape(const ProtocolTree& tree, std::span<const std::uint8_t> x,
                               std::span<const std::uint8_t> y, const QsimOptions& options) {
  tree.check_inputs(x, y);
  if (tree.share(ProtocolTree::root()).log_dim != 1) {
    throw CapabilityError("the simulator needs Q to be a single qudit");
  }
  std::mt19937_64 rng(options.seed);

  TapeRun main(tree, x, y, options.max_qudits);
  const Qudit reference = main.state.add_qudit(Holder::Verifier);
  const Qudit q = main.state.add_qudit(Holder::Left);
  main.state.fourier(reference);
  main.state.add_multiple(q, reference, 1);
  main.execute_sampled(q, rng);

  const auto winner = main.winner();
  if (!winner) throw InternalError("after the round Q is recoverable on both sides or on neither");
  const Side loser = opposite(*winner);

  QuantumReport report;
  report.x.assign(x.begin(), x.end());
  report.y.assign(y.begin(), y.end());
  report.owner = side_bit(*winner);
  report.epr_pairs_used = entanglement_cost(tree, x, y);
  if (static_cast<long long>(main.epr_pairs + tree.tape().idle_epr_pairs) != report.epr_pairs_used) {
    throw InternalError("simulation consumed " + std::to_string(main.epr_pairs) +
                        " EPR pairs, cost accounting says " + std::to_string(report.epr_pairs_used));
  }

  // Decoupling: the losing side's state must not depend on the secret.
  std::array<Eigen::MatrixXcd, 2> losing;
  for (auto& rho : losing) {
    TapeRun rerun(tree, x, y, options.max_qudits);
    const auto secret = random_qudit_state(tree.base(), rng);
    const Qudit s = rerun.state.add_qudit(Holder::Left, secret);
    rerun.execute_replayed(s, main.outcomes);
    const auto held = rerun.state.held_by(holder_of(loser));
    rho = rerun.state.reduced_density(held);
  }
  report.wrong_side_trace_distance = trace_distance(losing[0], losing[1]);

  const Qudit recovered = main.decode_on(ProtocolTree::root(), *winner);
  report.success_prob = main.state.epr_overlap(reference, recovered);
  return report;
}

std::string report_to_json(const QuantumReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"x\": \"%s\", \"y\": \"%s\", \"owner\": %u, \"success_prob\": %.6f, "
                "\"wrong_side_trace_distance\": %.6f, \"epr_pairs_used\": %lld}",
                format_bits(r.x).c_str(), format_bits(r.y).c_str(), static_cast<unsigned>(r.owner), r.success_prob,
                r.wrong_side_trace_distance, r.epr_pairs_used);
  return buf;
}

}  // namespace coderoute

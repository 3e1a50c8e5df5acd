#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coderoute/compilers.hpp"
#include "coderoute/errors.hpp"
#include "coderoute/evaluators.hpp"
#include "coderoute/qsim.hpp"
#include "coderoute/random_tapes.hpp"
#include "support/oracles.hpp"

using namespace coderoute;

namespace {

std::vector<Complex> random_state(std::mt19937_64& rng, std::uint32_t k) {
  std::normal_distribution<double> g;
  std::vector<Complex> v(k);
  double n = 0;
  for (auto& a : v) {
    a = {g(rng), g(rng)};
    n += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(n);
  return v;
}

// |<psi|rho|psi>| for the single remaining qudit q.
double fidelity(const PureState& s, PureState::Qudit q, const std::vector<Complex>& psi) {
  const std::vector<PureState::Qudit> keep{q};
  const auto rho = s.reduced_density(keep);
  Eigen::VectorXcd v(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi[i];
  return std::abs(v.dot(rho * v));
}

}  // namespace

TEST(PureState, GatesKeepNorm) {
  std::mt19937_64 rng(1);
  for (std::uint32_t k : {2u, 3u}) {
    PureState s(k);
    const auto a = s.add_qudit(Holder::Left, random_state(rng, k));
    const auto b = s.add_qudit(Holder::Right, random_state(rng, k));
    s.fourier(a);
    s.add_multiple(b, a, 1);
    s.shift(b, 1);
    s.phase(a, k - 1);
    if (k == 3) s.multiply(a, 2);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.probability(a, 0) + s.probability(a, 1) + (k == 3 ? s.probability(a, 2) : 0.0), 1.0, 1e-12);
  }
}

TEST(PureState, RegisterCap) {
  PureState s(3, 2);
  s.add_qudit(Holder::Left);
  s.add_qudit(Holder::Left);
  EXPECT_THROW(s.add_qudit(Holder::Left), CapabilityError);
}

TEST(PureState, FourierOfZeroIsUniform) {
  PureState s(3);
  const auto q = s.add_qudit(Holder::Left);
  s.fourier(q);
  for (std::uint32_t t = 0; t < 3; ++t) EXPECT_NEAR(s.probability(q, t), 1.0 / 3, 1e-12);
}

TEST(Epr, MaximallyEntangled) {
  for (std::uint32_t k : {2u, 3u}) {
    PureState s(k);
    const auto pair = make_epr(s, Holder::Left, Holder::Right);
    EXPECT_NEAR(s.epr_overlap(pair.near, pair.far), 1.0, 1e-12);
    const std::vector<PureState::Qudit> one{pair.far};
    const auto rho = s.reduced_density(one);
    EXPECT_LT((rho - Eigen::MatrixXcd::Identity(k, k) / double(k)).norm(), 1e-12);
  }
}

TEST(Teleport, RandomStatesArriveIntact) {
  std::mt19937_64 rng(2);
  for (std::uint32_t k : {2u, 3u}) {
    for (int trial = 0; trial < 50; ++trial) {
      PureState s(k);
      const auto psi = random_state(rng, k);
      const auto src = s.add_qudit(Holder::Left, psi);
      const auto pair = make_epr(s, Holder::Left, Holder::Right);
      const auto outcome = teleport(s, src, pair, rng);
      pauli_correct(s, pair.far, outcome);
      EXPECT_EQ(s.qudit_count(), 1u);
      EXPECT_NEAR(fidelity(s, pair.far, psi), 1.0, 1e-9);
    }
  }
}

TEST(Teleport, EveryOutcomeIsCorrectable) {
  std::mt19937_64 rng(3);
  const auto psi = random_state(rng, 3);
  for (std::uint32_t a = 0; a < 3; ++a) {
    for (std::uint32_t b = 0; b < 3; ++b) {
      PureState s(3);
      const auto src = s.add_qudit(Holder::Right, psi);
      const auto pair = make_epr(s, Holder::Right, Holder::Left);
      teleport_forced(s, src, pair, {a, b});
      pauli_correct(s, pair.far, {a, b});
      EXPECT_NEAR(fidelity(s, pair.far, psi), 1.0, 1e-9) << a << b;
    }
  }
}

TEST(Teleport, NeedsSameHolder) {
  std::mt19937_64 rng(4);
  PureState s(2);
  const auto src = s.add_qudit(Holder::Right);
  const auto pair = make_epr(s, Holder::Left, Holder::Right);
  EXPECT_THROW(teleport(s, src, pair, rng), ValidationError);
}

TEST(Threshold, SingleShareHidesSecret) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
  for (int trial = 0; trial < 10; ++trial) {
    PureState s(3);
    const auto q = s.add_qudit(Holder::Left, random_state(rng, 3));
    const auto shares = encode_threshold23(s, q);
    for (auto share : shares) {
      const std::vector<PureState::Qudit> keep{share};
      EXPECT_LT(trace_distance(s.reduced_density(keep), mixed), 1e-9);
    }
  }
}

TEST(Threshold, AnyTwoSharesRecover) {
  std::mt19937_64 rng(6);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      PureState s(3);
      const auto psi = random_state(rng, 3);
      const auto q = s.add_qudit(Holder::Left, psi);
      const auto shares = encode_threshold23(s, q);
      const auto out = decode_threshold23(s, shares[i], i, shares[j], j);
      EXPECT_NEAR(fidelity(s, out, psi), 1.0, 1e-9) << i << j;
    }
  }
}

TEST(TraceDistance, OrthogonalStates) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1;
  b(1, 1) = 1;
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-12);
}

TEST(RunTape, ExampleTapesSucceed) {
  for (const auto& tape : {example_and_tape(), example_or_tape(), example_nested_tape()}) {
    const auto tree = validate_and_build_tree(tape);
    for (std::uint8_t x : {0, 1}) {
      for (std::uint8_t y : {0, 1}) {
        const auto r = run_quantum_tape(tree, Bits{x}, Bits{y});
        EXPECT_EQ(r.owner, get_owner(tree, Bits{x}, Bits{y}).owner);
        EXPECT_NEAR(r.success_prob, 1.0, 1e-9);
        EXPECT_LE(r.wrong_side_trace_distance, 1e-9);
        EXPECT_EQ(r.epr_pairs_used, entanglement_cost(tree, Bits{x}, Bits{y}));
      }
    }
  }
}

TEST(RunTape, SeedDoesNotChangeOutcome) {
  const auto tree = validate_and_build_tree(example_nested_tape());
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    QsimOptions options;
    options.seed = seed;
    const auto r = run_quantum_tape(tree, Bits{0}, Bits{1}, options);
    EXPECT_NEAR(r.success_prob, 1.0, 1e-9);
  }
}

TEST(RunTape, RandomThresholdTapesAgreeWithGetOwner) {
  std::mt19937_64 rng(7);
  RandomTapeOptions opts;
  opts.max_depth = 3;
  opts.max_bits = 2;
  int ran = 0;
  for (int trial = 0; trial < 60 && ran < 15; ++trial) {
    const auto tree = validate_and_build_tree(random_tape(rng, opts));
    const Bits x(tree.tape().left_bits, 1);
    const Bits y(tree.tape().right_bits, 0);
    try {
      const auto r = run_quantum_tape(tree, x, y);
      EXPECT_EQ(r.owner, get_owner(tree, x, y).owner);
      EXPECT_NEAR(r.success_prob, 1.0, 1e-9);
      EXPECT_LE(r.wrong_side_trace_distance, 1e-9);
      ++ran;
    } catch (const CapabilityError&) {
      // Smith codes and re-encoded teleports are outside the simulator.
    }
  }
  EXPECT_GT(ran, 0);
}

TEST(RunTape, SmithCodesUnsupported) {
  const std::vector<BitRef> two{BitRef::input(Side::Left, 1), BitRef::input(Side::Right, 1)};
  const auto tree = validate_and_build_tree(compile_theorem1_indicator(library_program("AND"), two));
  EXPECT_THROW(run_quantum_tape(tree, Bits{1}, Bits{1}), CapabilityError);
}

TEST(RunTape, ReportJson) {
  const auto tree = validate_and_build_tree(example_and_tape());
  const auto json = report_to_json(run_quantum_tape(tree, Bits{1}, Bits{1}));
  EXPECT_NE(json.find("\"success_prob\": 1.000000"), std::string::npos) << json;
}

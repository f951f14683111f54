#include <gtest/gtest.h>

#include "dclab/criterion.hpp"
#include "dclab/errors.hpp"

using namespace dclab;

namespace {

const IndexLattice Z = IndexLattice::integers();
const IndexLattice C2 = IndexLattice::finite(2);

OperatorSpec flagship() { return OperatorSpec::forward_shift(Z, WeightRule::split(3, 4)); }

CriterionInstance flagship_instance() {
  const OperatorSpec f = flagship();
  return {f, SubspaceSpec::odd_indices(), {2, 0}, invert(f), {-9, 9}, 50};
}

}  // namespace

TEST(Schedule, Affine) {
  const AffineSchedule s{2, 1};
  EXPECT_EQ(s.at(1), 3u);
  EXPECT_EQ(s.at(10), 21u);
}

TEST(CriterionInstance, Validation) {
  CriterionInstance inst = flagship_instance();
  EXPECT_NO_THROW(validate(inst));
  inst.nk = {0, 3};
  try {
    validate(inst);
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.field(), "nk.a");
  }
  inst = flagship_instance();
  inst.back_map = OperatorSpec::identity(C2);
  EXPECT_THROW(validate(inst), InvariantViolation);
}

TEST(Criterion, DefaultProbes) {
  const auto probes = default_probes(flagship_instance());
  EXPECT_EQ(probes.size(), 19u);  // 10 odd indices in [-9, 9], 9 neighbour pairs
  EXPECT_EQ(probes.front().x, SupportVector::basis(Z, -9));
}

TEST(Criterion, FlagshipProbe) {
  const CriterionInstance inst = flagship_instance();
  const std::vector<Probe> probes{{SupportVector::basis(Z, 1), SupportVector::basis(Z, 1)}};
  const CriterionReport r = evaluate_criterion(inst, probes, 50);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.a.passed);
  EXPECT_TRUE(r.b.passed);
  EXPECT_TRUE(r.c.passed);
  EXPECT_EQ(r.c.scope, Scope::global);
  const auto& prod = r.b.entries.at(0).products_squared;
  ASSERT_TRUE(prod.ratio.has_value());
  EXPECT_EQ(*prod.ratio, Rational(9, 16));
  EXPECT_EQ(*prod.ratio_squared, Rational(81, 256));
  // Oracle: |F^{2k} e1|^2 |B^{2k} e1|^2 = 9^{2k} (1/9) 16^{1-2k}.
  for (std::uint64_t k = 1; k <= 50; ++k) {
    const Rational expect = rational_pow(9, 2 * k) * rational_pow(Rational(1, 16), 2 * k - 1) / 9;
    EXPECT_EQ(prod.values[k - 1], expect) << k;
  }
  EXPECT_EQ(r.a.entries.at(0).threshold_scan, std::optional<std::uint64_t>(1));
  EXPECT_EQ(r.a.entries.at(0).threshold_analytic, std::optional<std::uint64_t>(1));
}

TEST(Criterion, OddScheduleBreaksInvariance) {
  CriterionInstance inst = flagship_instance();
  inst.nk = {2, 1};
  const std::vector<Probe> probes{{SupportVector::basis(Z, 1), SupportVector::basis(Z, 1)}};
  const CriterionReport r = evaluate_criterion(inst, probes, 10);
  EXPECT_FALSE(r.c.passed);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.c.failing_k.has_value());
  EXPECT_EQ(*r.c.failing_k, 1u);
}

TEST(Criterion, IdentityFailsDecay) {
  const OperatorSpec id = OperatorSpec::identity(IndexLattice::finite(3));
  const CriterionInstance inst{id, Axis{3, 0}, {1, 0}, id, {0, 2}, 20};
  const auto probes = default_probes(inst);
  const CriterionReport r = evaluate_criterion(inst, probes, 20);
  EXPECT_FALSE(r.a.passed);
  EXPECT_FALSE(r.b.passed);
  EXPECT_TRUE(r.c.passed);
}

TEST(Criterion, PerturbedRightInverseThreshold) {
  // F = 2-weighted shift, back map z_j = 1/2 except z_5 = 1, z_3 = 1/4.
  // F^n B^n e7 = e7 needs both or neither of j = 5, 3 on the path: n = 2 ok,
  // n = 4 not, n >= 6 ok.
  const OperatorSpec f = OperatorSpec::forward_shift(Z, WeightRule::split(2, 2));
  const OperatorSpec b =
      OperatorSpec::backward_shift(Z, WeightTable{{{5, 1}, {3, Rational(1, 4)}}, Rational(1, 2)});
  const CriterionInstance inst{f, SubspaceSpec::odd_indices(), {2, 0}, b, {-9, 9}, 20};
  const SupportVector y = SupportVector::basis(Z, 7);
  EXPECT_EQ(right_inverse_threshold_scan(inst, y, 20), std::optional<std::uint64_t>(3));
  EXPECT_EQ(right_inverse_threshold_analytic(inst, y), std::optional<std::uint64_t>(3));
}

TEST(Criterion, BrokenBackMapIsAnInvariantViolation) {
  CriterionInstance inst = flagship_instance();
  inst.back_map = OperatorSpec::backward_shift(Z, WeightRule::split(1, 1));
  const std::vector<Probe> probes{{SupportVector::basis(Z, 1), SupportVector::basis(Z, 1)}};
  try {
    evaluate_criterion(inst, probes, 10);
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.field(), "back_map");
  }
}

TEST(Lambda, Cases) {
  for (std::uint64_t k = 1; k <= 6; ++k) {
    const LambdaChoice c = select_lambda(rational_pow(3, 4 * k), rational_pow(Rational(1, 4), 4 * k), k);
    EXPECT_EQ(c.case_number, 1);
    EXPECT_EQ(c.exactness, Exactness::exact);
    EXPECT_EQ(c.lambda, ExactComplex(rational_pow(Rational(1, 12), k)));
    EXPECT_TRUE(c.within_disk);
  }
  const LambdaChoice two = select_lambda(4, 0, 3);
  EXPECT_EQ(two.case_number, 2);
  EXPECT_EQ(two.lambda, ExactComplex(Rational(1, 16)));
  const LambdaChoice three = select_lambda(0, Rational(1, 16), 2);
  EXPECT_EQ(three.case_number, 3);
  EXPECT_TRUE(three.hypercyclic_path);
  EXPECT_EQ(three.lambda, ExactComplex(1));
  EXPECT_THROW(select_lambda(0, 0, 1), PreconditionViolation);
}

TEST(Lambda, BalancesTheTwoTerms) {
  // |lambda|^2 |Tx| = |x_k| when exact, i.e. |lambda|^4 |Tx|^2 = |x_k|^2.
  const Rational tx = 81, xk = Rational(1, 16);
  const LambdaChoice c = select_lambda(tx, xk, 1);
  ASSERT_EQ(c.exactness, Exactness::exact);
  const Rational l2 = magnitude_squared(c.lambda);
  EXPECT_EQ(l2 * l2 * tx, xk);
}

TEST(Lambda, BracketWhenNotAFourthPower) {
  const Rational tx = 2, xk = Rational(1, 3);
  const LambdaChoice c = select_lambda(tx, xk, 1);
  EXPECT_EQ(c.exactness, Exactness::approximate);
  const Rational l2 = magnitude_squared(c.lambda);
  const Rational q = xk / tx;
  const Rational err = l2 * l2 - q;
  EXPECT_LT(abs(err), power_of_ten(-18));
  EXPECT_LE(l2 * l2, q);  // lower end when q <= 1
}

TEST(Witness, FlagshipBalls) {
  const CriterionInstance inst = flagship_instance();
  const BallSpec u1{SupportVector::basis(Z, 1), Rational(1, 10)};
  const BallSpec u2{SupportVector::basis(Z, 3), Rational(1, 10)};
  const WitnessConstruction w = construct_diskcyclic_witness(inst, u1, u2, 50);
  ASSERT_TRUE(w.found);
  EXPECT_LE(w.k, 12u);
  EXPECT_TRUE(in_ball(u1, w.z));
  EXPECT_TRUE(contains(inst.sub, w.z));
  EXPECT_EQ(w.image, apply_power(inst.op, w.z, inst.nk.at(w.k)).scaled(w.lambda));
  EXPECT_TRUE(in_ball(u2, w.image));
  EXPECT_LE(magnitude_squared(w.lambda), 1);
}

TEST(Witness, SameBall) {
  const BallSpec u{SupportVector::basis(Z, 1), 1};
  const WitnessConstruction w = construct_diskcyclic_witness(flagship_instance(), u, u, 50);
  EXPECT_TRUE(w.found);
}

TEST(Witness, IdentityHasNone) {
  const IndexLattice c3 = IndexLattice::finite(3);
  const OperatorSpec id = OperatorSpec::identity(c3);
  const CriterionInstance inst{id, Axis{3, 0}, {1, 0}, id, {0, 2}, 20};
  const BallSpec u1{SupportVector::basis(c3, 0), Rational(1, 2)};
  const BallSpec u2{SupportVector::basis(c3, 0, 3), Rational(1, 2)};
  EXPECT_FALSE(construct_diskcyclic_witness(inst, u1, u2, 20).found);
}

TEST(BasisReduction, FlagshipPairs) {
  const std::vector<std::pair<Index, Index>> pairs{{1, 1}, {3, 1}, {-1, -5}, {5, 3}};
  const BasisReductionReport r = basis_reduction_check(flagship_instance(), pairs, 30);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.threshold, 5u);
  ASSERT_EQ(r.pairs.size(), 4u);
  for (const auto& v : r.pairs[0].ratios) EXPECT_EQ(v, 1);
  for (const auto& p : r.pairs) {
    EXPECT_TRUE(p.holds);
    EXPECT_EQ(p.ratios.back(), p.limit);
  }
}

TEST(BasisReduction, NeedsBilateralShifts) {
  const IndexLattice n = IndexLattice::naturals();
  const OperatorSpec f = OperatorSpec::forward_shift(n, WeightRule::split(2, 2));
  const CriterionInstance inst{f, IndexMask{n, 2, {1}}, {2, 0}, f, {0, 9}, 10};
  const std::vector<std::pair<Index, Index>> pairs{{1, 1}};
  EXPECT_THROW(basis_reduction_check(inst, pairs, 10), PreconditionViolation);
}

TEST(Transitivity, ScalarDoubling) {
  const OperatorSpec t = OperatorSpec::scalar(2, 2);
  const BallSpec u{SupportVector::basis(C2, 0, 4), Rational(1, 2)};
  const BallSpec v{SupportVector::basis(C2, 0), Rational(1, 2)};
  const TransitivityResult r = transitivity_probe(t, Axis{2, 0}, u, v);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.alpha.value(), ExactComplex(1));
  EXPECT_EQ(r.witness, SupportVector::basis(C2, 0));
  ASSERT_TRUE(r.invariance.has_value());
  EXPECT_TRUE(r.invariance->holds);
}

TEST(Transitivity, IdentitySeparatedBalls) {
  const IndexLattice c3 = IndexLattice::finite(3);
  const BallSpec u{SupportVector::basis(c3, 0, 3), Rational(1, 2)};
  const BallSpec v{SupportVector::basis(c3, 0), Rational(1, 2)};
  const TransitivityResult r = transitivity_probe(OperatorSpec::identity(c3), Axis{3, 0}, u, v);
  EXPECT_FALSE(r.found);
  EXPECT_GT(r.best_separation_squared, 0);
}

TEST(Transitivity, SameBallAtPowerZero) {
  const BallSpec u{SupportVector::basis(C2, 0), 1};
  const TransitivityResult r = transitivity_probe(OperatorSpec::scalar(2, 2), Axis{2, 0}, u, u);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.n, 0u);
}

TEST(Transitivity, SampledPairs) {
  const SubspaceSpec axis = Axis{2, 0};
  const OperatorSpec t = OperatorSpec::scalar(2, 2);
  for (const auto& [u, v] : sample_ball_pairs(axis, 10, 50, {-9, 9}, 42)) {
    const TransitivityResult r = transitivity_probe(t, axis, u, v);
    ASSERT_TRUE(r.found);
    EXPECT_TRUE(in_ball(v, r.witness));
    EXPECT_TRUE(in_ball(u, r.image));
    EXPECT_FALSE(r.alpha.value().is_zero());
    ASSERT_TRUE(r.invariance.has_value());
    EXPECT_TRUE(r.invariance->holds);
  }
}

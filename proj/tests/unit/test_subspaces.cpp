#include <gtest/gtest.h>

#include "dclab/errors.hpp"
#include "dclab/subspaces.hpp"

using namespace dclab;

namespace {
const IndexLattice Z = IndexLattice::integers();
OperatorSpec flagship() { return OperatorSpec::forward_shift(Z, WeightRule::split(3, 4)); }
}  // namespace

TEST(Subspace, OddMask) {
  const SubspaceSpec m = SubspaceSpec::odd_indices();
  EXPECT_TRUE(m.allows(1));
  EXPECT_TRUE(m.allows(-3));
  EXPECT_FALSE(m.allows(0));
  EXPECT_FALSE(m.allows(-2));
  EXPECT_TRUE(contains(m, SupportVector::basis(Z, 1)));
  EXPECT_FALSE(contains(m, SupportVector(Z, {{1, 1}, {2, 1}})));
  EXPECT_EQ(project(m, SupportVector(Z, {{1, 1}, {2, 1}})), SupportVector::basis(Z, 1));
  EXPECT_EQ(allowed_indices(m, {-3, 3}), (std::vector<Index>{-3, -1, 1, 3}));
}

TEST(Subspace, TrivialOnesAreRejected) {
  EXPECT_THROW(validate(SubspaceSpec(Axis{1, 0})), InvariantViolation);
  EXPECT_NO_THROW(validate(SubspaceSpec(Axis{1, 0}), true));
  EXPECT_THROW(validate(SubspaceSpec(IndexMask{Z, 2, {0, 1}})), InvariantViolation);
  EXPECT_THROW(validate(SubspaceSpec(IndexMask{Z, 2, {}})), InvariantViolation);
  EXPECT_NO_THROW(validate(SubspaceSpec(Axis{2, 0})));
}

TEST(Subspace, Balls) {
  const SubspaceSpec m = SubspaceSpec::odd_indices();
  const BallSpec b{SupportVector::basis(Z, 1), Rational(1, 10)};
  EXPECT_NO_THROW(validate(b, m));
  EXPECT_TRUE(in_ball(b, SupportVector::basis(Z, 1, ExactComplex(Rational(21, 20)))));
  EXPECT_FALSE(in_ball(b, SupportVector::basis(Z, 1, ExactComplex(Rational(11, 10)))));  // boundary is open
  EXPECT_THROW(validate(BallSpec{SupportVector::basis(Z, 2), 1}, m), InvariantViolation);
  EXPECT_THROW(validate(BallSpec{SupportVector::basis(Z, 1), 0}, m), InvariantViolation);
}

TEST(Invariance, EvenPowersKeepParityGlobally) {
  const SubspaceSpec m = SubspaceSpec::odd_indices();
  for (std::uint64_t k = 1; k <= 10; ++k) {
    const InvarianceVerdict v = invariance_check(flagship(), m, 2 * k, {-20, 20});
    EXPECT_TRUE(v.holds);
    EXPECT_EQ(v.scope, Scope::global);
    EXPECT_GT(v.checked, 0u);
  }
}

TEST(Invariance, OddPowerHasAWitness) {
  const InvarianceVerdict v = invariance_check(flagship(), SubspaceSpec::odd_indices(), 1, {-20, 20});
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(*v.witness, 1);
  ASSERT_TRUE(v.witness_image.has_value());
  EXPECT_EQ(*v.witness_image, SupportVector::basis(Z, 2, 3));
  EXPECT_EQ(v.scope, Scope::global);
}

TEST(Invariance, ScalarsAndFiniteLattices) {
  const SubspaceSpec axis = Axis{3, 0};
  EXPECT_TRUE(invariance_check(OperatorSpec::scalar(3, 2), axis, 5, {-9, 9}).holds);
  EXPECT_EQ(invariance_check(OperatorSpec::identity(IndexLattice::finite(3)), axis, 4, {-9, 9}).scope, Scope::global);
}

TEST(Sampling, TargetsAreDeterministicAndInside) {
  const SubspaceSpec m = SubspaceSpec::odd_indices();
  const auto a = sample_targets(m, 10, 200, {-9, 9}, 42);
  const auto b = sample_targets(m, 10, 200, {-9, 9}, 42);
  const auto c = sample_targets(m, 10, 200, {-9, 9}, 43);
  ASSERT_EQ(a.size(), 200u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_TRUE(a.front().is_zero());
  for (const auto& t : a) {
    EXPECT_TRUE(contains(m, t));
    EXPECT_LE(norm_squared(t), 100);
    for (const auto& [i, v] : t.entries()) {
      EXPECT_GE(i, -9);
      EXPECT_LE(i, 9);
    }
  }
  // The head holds one scaled basis vector per allowed index.
  EXPECT_EQ(a[1].support_size(), 1u);
  EXPECT_EQ(norm_squared(a[1]), 100);
}

TEST(Sampling, BallPairs) {
  const SubspaceSpec axis = Axis{2, 0};
  const auto pairs = sample_ball_pairs(axis, 10, 50, {-9, 9}, 42);
  ASSERT_EQ(pairs.size(), 50u);
  EXPECT_EQ(pairs, sample_ball_pairs(axis, 10, 50, {-9, 9}, 42));
  for (const auto& [u, v] : pairs) {
    EXPECT_NO_THROW(validate(u, axis));
    EXPECT_NO_THROW(validate(v, axis));
    EXPECT_EQ(Rational(u.radius * 8).get_den(), 1);
    EXPECT_GT(u.radius, 0);
    EXPECT_LE(u.radius, 1);
  }
}

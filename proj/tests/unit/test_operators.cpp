#include <gtest/gtest.h>

#include <random>

#include "dclab/errors.hpp"
#include "dclab/operators.hpp"

using namespace dclab;

namespace dclab {
void PrintTo(const SupportVector& v, std::ostream* os) {
  *os << "{";
  for (const auto& [i, c] : v.entries()) *os << " " << i << ":" << to_string(c.re()) << "+" << to_string(c.im()) << "i";
  *os << " }";
}
}  // namespace dclab

namespace {

const IndexLattice Z = IndexLattice::integers();
const IndexLattice N = IndexLattice::naturals();

OperatorSpec flagship() { return OperatorSpec::forward_shift(Z, WeightRule::split(3, 4)); }

// Oracle: n single applications, written out entry by entry.
SupportVector repeated(const OperatorSpec& op, SupportVector v, std::uint64_t n) {
  for (std::uint64_t s = 0; s < n; ++s) {
    SupportVector next(v.lattice());
    for (const auto& [i, c] : v.entries()) {
      if (op.is_forward_shift()) {
        next.add(i + 1, c * op.shift_weights().at(i));
      } else if (i - 1 >= 0 || v.lattice().kind == LatticeKind::bilateral) {
        next.add(i - 1, c * op.shift_weights().at(i));
      }
    }
    v = next;
  }
  return v;
}

SupportVector random_vector(std::mt19937_64& rng, IndexLattice lat, Index lo, Index hi) {
  SupportVector v(lat);
  const int terms = 1 + static_cast<int>(rng() % 4);
  for (int t = 0; t < terms; ++t) {
    const Index i = lo + static_cast<Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    v.add(i, ExactComplex(Rational(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 5)),
                          Rational(static_cast<long>(rng() % 5) - 2, 3)));
  }
  return v;
}

}  // namespace

TEST(Shift, FlagshipMovesE0ToThreeE1) {
  EXPECT_EQ(apply(flagship(), SupportVector::basis(Z, 0)), SupportVector::basis(Z, 1, 3));
  EXPECT_EQ(apply(flagship(), SupportVector::basis(Z, -1)), SupportVector::basis(Z, 0, 4));
}

TEST(Shift, InverseWeights) {
  const OperatorSpec b = invert(flagship());
  ASSERT_TRUE(b.is_backward_shift());
  EXPECT_EQ(b.shift_weights().at(1), ExactComplex(Rational(1, 3)));
  EXPECT_EQ(b.shift_weights().at(5), ExactComplex(Rational(1, 3)));
  EXPECT_EQ(b.shift_weights().at(0), ExactComplex(Rational(1, 4)));
  EXPECT_EQ(b.shift_weights().at(-7), ExactComplex(Rational(1, 4)));
  for (Index i = -6; i <= 6; ++i) {
    const SupportVector e = SupportVector::basis(Z, i);
    EXPECT_EQ(apply(b, apply(flagship(), e)), e);
    EXPECT_EQ(apply(flagship(), apply(b, e)), e);
  }
}

TEST(Shift, WeightProductOfTheInverse) {
  const OperatorSpec b = invert(flagship());
  for (std::uint64_t k = 1; k <= 20; ++k) {
    const Rational expected = Rational(1, 3) / rational_pow(Rational(4), 2 * k - 1);
    EXPECT_EQ(weight_product(b, 1, 2 * k), ExactComplex(expected)) << k;
  }
  // |B^4 e_1|^2 = (1/3 * 1/4^3)^2.
  EXPECT_EQ(norm_squared(apply_power(b, SupportVector::basis(Z, 1), 4)), Rational(1, 36864));
}

TEST(Shift, ForwardNormsArePowersOfThree) {
  for (std::uint64_t n = 0; n <= 20; ++n) {
    EXPECT_EQ(norm_squared(apply_power(flagship(), SupportVector::basis(Z, 1), n)), rational_pow(Rational(9), n));
  }
}

TEST(Shift, ClosedFormMatchesRepeatedApplication) {
  std::mt19937_64 rng(11);
  WeightTable table;
  table.fallback = ExactComplex(2);
  table.entries = {{-2, ExactComplex(Rational(1, 2))}, {0, ExactComplex(0, 1)}, {3, ExactComplex(5)}};
  const std::vector<OperatorSpec> ops{
      flagship(),
      invert(flagship()),
      OperatorSpec::forward_shift(Z, table),
      OperatorSpec::backward_shift(Z, table),
      OperatorSpec::backward_shift(N, WeightRule::split(ExactComplex(1, 1), 7)),
      OperatorSpec::forward_shift(N, WeightRule::split(Rational(2, 3), 1, 4)),
  };
  for (const auto& op : ops) {
    const bool unilateral = op.lattice().kind == LatticeKind::unilateral;
    for (int t = 0; t < 20; ++t) {
      const SupportVector v = random_vector(rng, op.lattice(), unilateral ? 0 : -8, 8);
      for (std::uint64_t n = 0; n <= 12; ++n) {
        EXPECT_EQ(apply_power(op, v, n), repeated(op, v, n)) << describe(op) << " n=" << n;
      }
    }
  }
}

TEST(Shift, UnilateralBackwardAnnihilates) {
  const OperatorSpec b = OperatorSpec::backward_shift(N, WeightRule::split(2, 2));
  EXPECT_TRUE(apply(b, SupportVector::basis(N, 0)).is_zero());
  EXPECT_EQ(apply_power(b, SupportVector::basis(N, 3), 3), SupportVector::basis(N, 0, 8));
  EXPECT_TRUE(apply_power(b, SupportVector::basis(N, 3), 4).is_zero());
  EXPECT_THROW(weight_product(b, 2, 4), PathExitsLattice);
  EXPECT_THROW(weight_product(b, -1, 1), PathExitsLattice);
}

TEST(Shift, ShiftsNeedSequenceLattices) {
  EXPECT_THROW(OperatorSpec::forward_shift(IndexLattice::finite(3), WeightRule::split(1, 1)), InvariantViolation);
  EXPECT_THROW(weight_product(OperatorSpec::scalar(2, 2), 0, 1), Unsupported);
}

TEST(Invertibility, Rules) {
  EXPECT_TRUE(is_invertible(flagship()));
  EXPECT_FALSE(is_invertible(OperatorSpec::forward_shift(N, WeightRule::split(3, 4))));
  EXPECT_FALSE(is_invertible(OperatorSpec::forward_shift(Z, WeightRule::split(3, 0))));
  EXPECT_TRUE(is_invertible(OperatorSpec::scalar(2, ExactComplex(0, 1))));
  EXPECT_FALSE(is_invertible(OperatorSpec::scalar(2, 0)));
  EXPECT_THROW(invert(OperatorSpec::forward_shift(N, WeightRule::split(3, 4))), NotInvertible);
  EXPECT_EQ(invert(OperatorSpec::scalar(2, 4)), OperatorSpec::scalar(2, ExactComplex(Rational(1, 4))));
  const OperatorSpec b = invert(flagship());
  EXPECT_EQ(invert(b), flagship());
}

TEST(Adjoint, ScalarConjugates) {
  EXPECT_EQ(adjoint(OperatorSpec::scalar(2, ExactComplex(1, 1))), OperatorSpec::scalar(2, ExactComplex(1, -1)));
  EXPECT_THROW(adjoint(flagship()), Unsupported);
}

TEST(DirectSum, ActsBlockwise) {
  const OperatorSpec s =
      OperatorSpec::direct_sum({OperatorSpec::scalar(1, 2), OperatorSpec::identity(IndexLattice::finite(2))});
  EXPECT_EQ(s.lattice(), IndexLattice::finite(3));
  const SupportVector v(IndexLattice::finite(3), {{0, 1}, {1, 5}, {2, ExactComplex(0, 1)}});
  EXPECT_EQ(apply_power(s, v, 3), SupportVector(IndexLattice::finite(3), {{0, 8}, {1, 5}, {2, ExactComplex(0, 1)}}));
  EXPECT_FALSE(is_invertible(OperatorSpec::direct_sum({OperatorSpec::scalar(1, 0), OperatorSpec::scalar(1, 1)})));
}

TEST(PowerMayTouch, NeverHidesAnEntry) {
  std::mt19937_64 rng(5);
  const std::vector<OperatorSpec> ops{flagship(), invert(flagship()),
                                      OperatorSpec::backward_shift(N, WeightRule::split(2, 2))};
  for (const auto& op : ops) {
    const bool unilateral = op.lattice().kind == LatticeKind::unilateral;
    for (int t = 0; t < 20; ++t) {
      const SupportVector v = random_vector(rng, op.lattice(), unilateral ? 0 : -6, 6);
      for (std::uint64_t n = 0; n <= 8; ++n) {
        const SupportVector image = apply_power(op, v, n);
        for (Index i = unilateral ? 0 : -16; i <= 16; ++i) {
          if (image.has(i)) EXPECT_TRUE(power_may_touch(op, v, n, i));
        }
      }
    }
  }
}

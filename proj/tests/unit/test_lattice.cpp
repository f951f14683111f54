#include <gtest/gtest.h>

#include "dclab/errors.hpp"
#include "dclab/lattice.hpp"

using namespace dclab;

namespace {
const IndexLattice Z = IndexLattice::integers();
const IndexLattice N = IndexLattice::naturals();
}  // namespace

TEST(Lattice, Admits) {
  EXPECT_TRUE(Z.admits(-5));
  EXPECT_FALSE(N.admits(-1));
  EXPECT_TRUE(N.admits(0));
  const auto c3 = IndexLattice::finite(3);
  EXPECT_TRUE(c3.admits(2));
  EXPECT_FALSE(c3.admits(3));
  EXPECT_EQ(describe(Z), "Z");
  EXPECT_EQ(describe(N), "N");
  EXPECT_EQ(describe(c3), "C^3");
  EXPECT_THROW(IndexLattice::finite(0), InvariantViolation);
}

TEST(SupportVector, CanonicalForm) {
  SupportVector v(Z);
  v.set(3, ExactComplex(2));
  v.set(-1, ExactComplex(0, 1));
  v.set(7, ExactComplex(0));
  EXPECT_EQ(v.support_size(), 2u);
  EXPECT_EQ(*v.min_index(), -1);
  EXPECT_EQ(*v.max_index(), 3);
  v.add(3, ExactComplex(-2));
  EXPECT_FALSE(v.has(3));
  EXPECT_EQ(v.at(3), ExactComplex(0));
}

TEST(SupportVector, RejectsForeignIndices) {
  SupportVector v(N);
  EXPECT_THROW(v.set(-1, ExactComplex(1)), LatticeMismatch);
  SupportVector w(IndexLattice::finite(2));
  EXPECT_THROW(w.set(2, ExactComplex(1)), LatticeMismatch);
}

TEST(SupportVector, NormsAndDistances) {
  const SupportVector e1 = SupportVector::basis(Z, 1);
  EXPECT_EQ(norm_squared(e1), 1);
  const SupportVector v(Z, {{-3, ExactComplex(1)}, {5, ExactComplex(2)}});
  EXPECT_EQ(norm_squared(v), 5);
  EXPECT_EQ(distance_squared(v, e1), 6);
  EXPECT_EQ(distance_squared(v, v), 0);
  const SupportVector w(Z, {{5, ExactComplex(0, 1)}});
  EXPECT_EQ(detail::inner_product(v, w), ExactComplex(0, -2));
  EXPECT_EQ(axpy(ExactComplex(2), e1, v), SupportVector(Z, {{-3, 1}, {1, 2}, {5, 2}}));
  EXPECT_EQ(v.scaled(ExactComplex(0)), SupportVector(Z));
}

TEST(SupportVector, MixedLatticesAreRejected) {
  EXPECT_THROW(distance_squared(SupportVector::basis(Z, 0), SupportVector::basis(N, 0)), LatticeMismatch);
  EXPECT_THROW(require_same_lattice(Z, N, "test"), LatticeMismatch);
}

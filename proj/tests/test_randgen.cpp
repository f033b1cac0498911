#include <gtest/gtest.h>

#include <set>

#include "qssa/measurement.hpp"
#include "qssa/randgen.hpp"

namespace qssa {
namespace {

TEST(Seed, DerivedSubstreamsAreDistinctAndStable) {
  const Seed s{42};
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(s.derive(k).value);
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(s.derive(7).value, Seed{42}.derive(7).value);
  EXPECT_NE(Seed{1}.derive(0).value, Seed{2}.derive(0).value);
  // splitmix64 reference output for state 0 after one increment.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, UniformRangeAndNormalMoments) {
  Rng rng(Seed{5});
  double mean = 0.0, sq = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    mean += z;
    sq += z * z;
  }
  mean /= n;
  sq /= n;
  EXPECT_NEAR(mean, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq, 1.0, 0.02);
}

TEST(RandomDensity, ReplayIsBitIdentical) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto a = random_density(HilbertDims{2, 3}, Seed{s});
    const auto b = random_density(HilbertDims{2, 3}, Seed{s});
    EXPECT_EQ(a.mat(), b.mat());
  }
  EXPECT_NE(random_density(HilbertDims{2}, Seed{1}).mat(), random_density(HilbertDims{2}, Seed{2}).mat());
}

TEST(RandomDensity, ContractAndRank) {
  for (std::size_t rank = 1; rank <= 6; ++rank) {
    const auto rho = random_density(HilbertDims{2, 3}, rank, Seed{rank});
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    EXPECT_GE(rho.spectrum()[0], -1e-12);
    std::size_t nonzero = 0;
    for (Eigen::Index i = 0; i < rho.spectrum().size(); ++i)
      if (rho.spectrum()[i] > 1e-10) ++nonzero;
    EXPECT_EQ(nonzero, rank);
  }
  EXPECT_THROW(random_density(HilbertDims{2}, 0, Seed{1}), Error);
  EXPECT_THROW(random_density(HilbertDims{2}, 3, Seed{1}), Error);
}

TEST(RandomUnitary, Unitarity) {
  for (std::size_t dim : {1u, 2u, 5u, 12u, 36u}) {
    const ComplexMatrix u = random_unitary(dim, Seed{dim});
    const auto n = static_cast<Eigen::Index>(dim);
    EXPECT_LE(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(n, n)), 1e-12) << dim;
  }
}

TEST(RandomHermitian, IsHermitian) {
  const ComplexMatrix h = random_hermitian(7, Seed{3});
  EXPECT_EQ(h, h.adjoint());
}

TEST(RandomProbabilities, Simplex) {
  const auto p = random_probabilities(9, Seed{4});
  double total = 0.0;
  for (double x : p) {
    EXPECT_GT(x, 0.0);
    total += x;
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(RandomKraus, Completeness) {
  for (std::size_t dim = 1; dim <= 36; dim += 5)
    for (std::size_t count = 1; count <= 8; ++count) {
      const auto k = random_kraus(dim, count, Seed{dim * 100 + count});
      EXPECT_EQ(k.size(), count);
      EXPECT_LE(check_completeness(k), 1e-12) << dim << " x " << count;
    }
  EXPECT_THROW(random_kraus(2, 0, Seed{1}), Error);
}

TEST(RandomKraus, Replay) {
  const auto a = random_kraus(4, 3, Seed{9});
  const auto b = random_kraus(4, 3, Seed{9});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.ops[i], b.ops[i]);
}

TEST(RandomPovm, Contract) {
  for (std::size_t dim = 1; dim <= 6; ++dim)
    for (std::size_t count = 1; count <= 6; ++count) {
      const auto p = random_povm(dim, count, Seed{dim * 10 + count});
      ASSERT_EQ(p.size(), count);
      const auto n = static_cast<Eigen::Index>(dim);
      ComplexMatrix sum = ComplexMatrix::Zero(n, n);
      for (const auto& e : p.elements) {
        EXPECT_GE(hermitian_eigenvalues(e)[0], -1e-12);
        sum += e;
      }
      EXPECT_LE(max_abs_diff(sum, ComplexMatrix::Identity(n, n)), 1e-12);
    }
}

TEST(RandomPovm, SingleElementIsIdentity) {
  const auto p = random_povm(3, 1, Seed{2});
  EXPECT_LE(max_abs_diff(p.elements[0], ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(RandomCq, BlockStructure) {
  const HilbertDims dims{2, 3, 2};
  const auto inst = random_cq_instance(dims, Seed{11});
  const auto rho = inst.density();
  EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  for (Eigen::Index r = 0; r < 12; ++r)
    for (Eigen::Index c = 0; c < 12; ++c)
      if (r / 2 != c / 2) {
        EXPECT_EQ(rho.mat()(r, c), Complex(0.0, 0.0));
      }
  for (std::size_t ij = 0; ij < 6; ++ij) {
    const auto off = static_cast<Eigen::Index>(2 * ij);
    EXPECT_LE(max_abs_diff(rho.mat().block(off, off, 2, 2), inst.probs[ij] * inst.sigmas[ij].mat()),
              1e-15);
  }
  EXPECT_EQ(random_cq_state(dims, Seed{11}).mat(), rho.mat());
  EXPECT_THROW(random_cq_state(HilbertDims{2, 2}, Seed{1}), Error);
}

}  // namespace
}  // namespace qssa

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qssa/linalg.hpp"
#include "qssa/randgen.hpp"

namespace qssa {
namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d[i++] = x;
  return d.cast<Complex>().asDiagonal();
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

DensityMatrix bell_state() {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
  return pure_state(psi, HilbertDims{2, 2});
}

TEST(HilbertDims, TotalAndValidation) {
  HilbertDims d{2, 3, 4};
  EXPECT_EQ(d.total(), 24u);
  EXPECT_EQ(d[2], 3u);
  EXPECT_THROW(HilbertDims(std::vector<std::size_t>{}), Error);
  EXPECT_THROW((HilbertDims{2, 0}), Error);
}

TEST(Kron, IdentityAndScalarFactor) {
  EXPECT_EQ(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)),
            ComplexMatrix::Identity(6, 6));
  EXPECT_EQ(kron(diag({1, 2}), diag({3})), diag({3, 6}));
}

TEST(Kron, MatchesIndexOracle) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(Seed{s});
    const ComplexMatrix a = rng.gaussian_matrix(2, 2);
    const ComplexMatrix b = rng.gaussian_matrix(2, 3);
    EXPECT_LE(max_abs_diff(kron(a, b), oracle::kron(a, b)), 0.0);
  }
}

TEST(Kron, Associative) {
  Rng rng(Seed{3});
  const ComplexMatrix a = rng.gaussian_matrix(2, 2);
  const ComplexMatrix b = rng.gaussian_matrix(3, 3);
  const ComplexMatrix c = rng.gaussian_matrix(2, 2);
  EXPECT_LE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-13);
}

TEST(PartialTrace, ProductState) {
  const auto a = random_density(HilbertDims{2}, Seed{1});
  const auto b = random_density(HilbertDims{3}, Seed{2});
  const auto ab = tensor(a, b);
  EXPECT_LE(max_abs_diff(partial_trace(ab, {1}).mat(), b.trace() * a.mat()), 1e-14);
  EXPECT_LE(max_abs_diff(partial_trace(ab, {2}).mat(), b.mat()), 1e-14);
}

TEST(PartialTrace, BellReductionIsMaximallyMixed) {
  EXPECT_LE(max_abs_diff(partial_trace(bell_state(), {1}).mat(),
                         ComplexMatrix::Identity(2, 2) / 2.0),
            1e-15);
}

TEST(PartialTrace, MatchesTripleIndexOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rho = random_density(HilbertDims{2, 3, 2}, Seed{s});
    const oracle::Tripartite t{rho.mat(), 2, 3, 2};
    EXPECT_LE(max_abs_diff(partial_trace(rho, {1, 3}).mat(), t.keep13()), 1e-12);
    EXPECT_LE(max_abs_diff(partial_trace(rho, {2}).mat(), t.keep2()), 1e-12);
    EXPECT_LE(max_abs_diff(partial_trace(rho, {2, 3}).mat(), t.keep23()), 1e-12);
  }
}

TEST(PartialTrace, KeptFactorsRetainOrder) {
  const auto rho = random_density(HilbertDims{2, 3, 4}, Seed{8});
  const auto r = partial_trace(rho, {3, 1});
  EXPECT_EQ(r.dims(), (HilbertDims{2, 4}));
}

TEST(PartialTrace, CompositionAndTracePreservation) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto rho = random_density(HilbertDims{2, 3, 2}, Seed{100 + s});
    const auto direct = partial_trace(rho, {2});
    const auto staged = partial_trace(partial_trace(rho, {2, 3}), {1});
    EXPECT_LE(max_abs_diff(direct.mat(), staged.mat()), 1e-12);
    for (auto keep : std::vector<std::vector<std::size_t>>{{1}, {3}, {1, 2}, {1, 2, 3}})
      EXPECT_NEAR(partial_trace(rho, keep).trace(), rho.trace(), 1e-12);
  }
}

TEST(PartialTrace, Errors) {
  const auto rho = random_density(HilbertDims{2, 2}, Seed{1});
  EXPECT_THROW(partial_trace(rho, {}), Error);
  EXPECT_THROW(partial_trace(rho, {3}), Error);
  EXPECT_THROW(partial_trace(rho, {0}), Error);
}

TEST(HermitianEig, KnownSpectra) {
  const auto d = hermitian_eig(diag({3, 1, 2}));
  EXPECT_NEAR(d.values[0], 1.0, 1e-15);
  EXPECT_NEAR(d.values[1], 2.0, 1e-15);
  EXPECT_NEAR(d.values[2], 3.0, 1e-15);
  const auto x = hermitian_eig(pauli_x());
  EXPECT_NEAR(x.values[0], -1.0, 1e-15);
  EXPECT_NEAR(x.values[1], 1.0, 1e-15);
}

TEST(HermitianEig, ReconstructionAndOrthonormality) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix m = random_hermitian(6, Seed{s});
    const auto es = hermitian_eig(m);
    const ComplexMatrix rebuilt =
        es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LE((rebuilt - m).norm(), 1e-9);
    EXPECT_LE(max_abs_diff(es.vectors.adjoint() * es.vectors, ComplexMatrix::Identity(6, 6)), 1e-10);
    const double scale = std::max(1.0, m.operatorNorm());
    for (Eigen::Index i = 0; i < 6; ++i)
      EXPECT_LE((m * es.vectors.col(i) - es.values[i] * es.vectors.col(i)).norm(), 1e-10 * scale);
    EXPECT_NEAR(es.values.sum(), m.trace().real(), 1e-10 * 6);
    for (Eigen::Index i = 1; i < 6; ++i) EXPECT_LE(es.values[i - 1], es.values[i]);
  }
}

TEST(HermitianEig, RejectsNonSquareAndAsymmetric) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), Error);
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 1e-3;
  EXPECT_THROW(hermitian_eig(m), Error);
}

TEST(MatrixFn, Logarithm) {
  EXPECT_LE(matrix_log(ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(max_abs_diff(matrix_log(diag({1, std::numbers::e})), diag({0, 1})), 1e-15);
}

TEST(MatrixFn, ExpLogRoundTrip) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto es = hermitian_eig(random_hermitian(5, Seed{s}));
    RealVector spectrum(5);
    for (Eigen::Index i = 0; i < 5; ++i) spectrum[i] = 0.2 + 0.5 * i;
    const ComplexMatrix a = es.vectors * spectrum.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LE((matrix_exp(matrix_log(a)) - a).norm(), 1e-9);
  }
}

TEST(MatrixFn, LogClamp) {
  const ComplexMatrix singular = diag({1, 0});
  EXPECT_THROW(matrix_log(singular), Error);
  const ComplexMatrix clamped = matrix_log(singular, LogClamp::on);
  EXPECT_NEAR(clamped(1, 1).real(), std::log(1e-12), 1e-9);
  EXPECT_NEAR(matrix_fn(diag({4, 9}), [](double x) { return std::sqrt(x); })(1, 1).real(), 3.0,
              1e-14);
}

TEST(TraceDistance, Basics) {
  const auto rho = random_density(HilbertDims{3}, Seed{4});
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-15);
  const auto zero = pure_state(basis_vector(2, 0), HilbertDims{2});
  const auto one = pure_state(basis_vector(2, 1), HilbertDims{2});
  EXPECT_NEAR(trace_distance(zero, one), 1.0, 1e-15);
  EXPECT_THROW(trace_distance(zero, rho), Error);
}

TEST(TraceDistance, MatchesSingularValueOracle) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = random_density(HilbertDims{4}, Seed{s});
    const auto b = random_density(HilbertDims{4}, Seed{s + 50});
    const Eigen::JacobiSVD<ComplexMatrix> svd(a.mat() - b.mat());
    const double oracle = 0.5 * svd.singularValues().sum();
    EXPECT_NEAR(trace_distance(a, b), oracle, 1e-12);
    EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-14);
    EXPECT_GE(trace_distance(a, b), 0.0);
  }
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(diag({0.5, 0.6}), 2), Error);                // trace
  EXPECT_THROW(DensityMatrix(diag({1.2, -0.2}), 2), Error);               // negative
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0, 2), Error);  // size
  ComplexMatrix asym = diag({0.5, 0.5});
  asym(0, 1) = 1e-6;
  EXPECT_THROW(DensityMatrix(asym, 2), Error);
  asym(0, 1) = 1e-12;
  const DensityMatrix ok(asym, 2);
  EXPECT_NEAR(ok.asymmetry(), 1e-12, 1e-20);
  EXPECT_EQ(ok.mat(), ok.mat().adjoint());

  DensityOptions loose;
  loose.unnormalized = true;
  EXPECT_NO_THROW(DensityMatrix(diag({1.0, 2.0}), 2, loose));
  EXPECT_THROW(DensityMatrix(diag({0.0, 0.0}), 2, loose), Error);
}

}  // namespace
}  // namespace qssa

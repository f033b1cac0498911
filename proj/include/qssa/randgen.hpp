#pragma once

// Seeded generators for every random object the checks consume.
//
// Engine: std::mt19937_64 (fully specified by the C++ standard), seeded with
// splitmix64(seed). Substreams: Seed::derive(k) = splitmix64(value ^
// splitmix64(k + 1)), so each sub-object draws from its own engine.
// Uniforms take the top 53 bits; normals use Box-Muller; a standard complex
// Gaussian is (x + iy)/sqrt(2).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "qssa/linalg.hpp"
#include "qssa/operators.hpp"

namespace qssa {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64/splitmix64-substreams/box-muller";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Seed {
  std::uint64_t value = 0;

  constexpr Seed derive(std::uint64_t substream) const {
    return Seed{splitmix64(value ^ splitmix64(substream + 1))};
  }
  friend constexpr bool operator==(Seed, Seed) = default;
};

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(splitmix64(seed.value)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Complex complex_normal() {
    const double x = normal();
    const double y = normal();
    return Complex(x, y) * (1.0 / std::numbers::sqrt2);
  }

  ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
    ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = complex_normal();
    return g;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// G G^dagger / Tr(G G^dagger) with G a (total x rank) complex Gaussian matrix.
inline DensityMatrix random_density(const HilbertDims& dims, std::size_t rank, Seed seed) {
  const std::size_t n = dims.total();
  if (rank < 1 || rank > n)
    throw Error("random_density: rank " + std::to_string(rank) + " out of range");
  Rng rng(seed);
  const ComplexMatrix g = rng.gaussian_matrix(n, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho, dims);
}

inline DensityMatrix random_density(const HilbertDims& dims, Seed seed) {
  return random_density(dims, dims.total(), seed);
}

/// Haar unitary: QR of a complex Gaussian matrix with R's diagonal phases
/// moved into Q.
inline ComplexMatrix random_unitary(std::size_t dim, Seed seed) {
  if (dim < 1) throw Error("random_unitary: dim must be >= 1");
  Rng rng(seed);
  const ComplexMatrix z = rng.gaussian_matrix(dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

/// Random Hermitian matrix from the Gaussian unitary ensemble, (G + G^dagger)/2.
inline ComplexMatrix random_hermitian(std::size_t dim, Seed seed) {
  Rng rng(seed);
  const ComplexMatrix g = rng.gaussian_matrix(dim, dim);
  return (g + g.adjoint()) * 0.5;
}

/// Probability vector drawn uniformly from the simplex.
inline std::vector<double> random_probabilities(std::size_t n, Seed seed) {
  Rng rng(seed);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

/// Classical-quantum state sum_ij p(i,j) |i><i| (x) |j><j| (x) sigma_ij on
/// three factors. `probs` and `sigmas` are indexed by i * d2 + j.
struct CqInstance {
  std::vector<double> probs;
  std::vector<DensityMatrix> sigmas;
  HilbertDims dims;
  ComplexMatrix state;

  DensityMatrix density() const { return DensityMatrix(state, dims); }
};

inline CqInstance make_cq_instance(const HilbertDims& dims, std::vector<double> probs,
                                   std::vector<DensityMatrix> sigmas) {
  if (dims.factors() != 3) throw Error("cq state: need exactly 3 factors");
  const std::size_t d1 = dims[1], d2 = dims[2], d3 = dims[3];
  if (probs.size() != d1 * d2 || sigmas.size() != d1 * d2)
    throw Error("cq state: need d1*d2 weights and conditional states");
  const auto n3 = static_cast<Eigen::Index>(d3);
  ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(dims.total()),
                                          static_cast<Eigen::Index>(dims.total()));
  for (std::size_t ij = 0; ij < d1 * d2; ++ij) {
    if (sigmas[ij].dim() != d3) throw Error("cq state: conditional state has wrong dim");
    const auto off = static_cast<Eigen::Index>(ij) * n3;
    rho.block(off, off, n3, n3) = probs[ij] * sigmas[ij].mat();
  }
  return CqInstance{std::move(probs), std::move(sigmas), dims, std::move(rho)};
}

inline CqInstance random_cq_instance(const HilbertDims& dims, Seed seed) {
  if (dims.factors() != 3) throw Error("random_cq_state: need exactly 3 factors");
  const std::size_t blocks = dims[1] * dims[2];
  auto probs = random_probabilities(blocks, seed.derive(0));
  std::vector<DensityMatrix> sigmas;
  sigmas.reserve(blocks);
  for (std::size_t ij = 0; ij < blocks; ++ij)
    sigmas.push_back(random_density(HilbertDims{dims[3]}, seed.derive(1 + ij)));
  return make_cq_instance(dims, std::move(probs), std::move(sigmas));
}

inline DensityMatrix random_cq_state(const HilbertDims& dims, Seed seed) {
  return random_cq_instance(dims, seed).density();
}

/// Kraus set from a Haar isometry: the first `dim` columns of a Haar unitary
/// on dim*count dimensions, sliced into `count` blocks of `dim` rows.
inline KrausSet random_kraus(std::size_t dim, std::size_t count, Seed seed,
                             std::vector<std::size_t> acts_on = {1, 2}) {
  if (count < 1) throw Error("random_kraus: count must be >= 1");
  const ComplexMatrix u = random_unitary(dim * count, seed);
  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(count);
  for (std::size_t a = 0; a < count; ++a)
    ops.emplace_back(u.block(static_cast<Eigen::Index>(a) * n, 0, n, n));
  return KrausSet(std::move(ops), std::move(acts_on));
}

/// P_i = T^{-1/2} A_i T^{-1/2} with A_i = G_i G_i^dagger and T = sum A_i.
/// A numerically singular T is redrawn from a fresh substream (5 attempts).
inline Povm random_povm(std::size_t dim, std::size_t count, Seed seed) {
  if (count < 1) throw Error("random_povm: count must be >= 1");
  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(seed.derive(static_cast<std::uint64_t>(attempt)));
    std::vector<ComplexMatrix> a;
    a.reserve(count);
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix total = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < count; ++i) {
      const ComplexMatrix g = rng.gaussian_matrix(dim, dim);
      a.emplace_back(g * g.adjoint());
      total += a.back();
    }
    const auto es = hermitian_eig(total);
    if (es.values[0] < 1e-10 * std::max(1.0, es.values[es.values.size() - 1])) continue;
    const RealVector inv_sqrt = es.values.cwiseSqrt().cwiseInverse();
    const ComplexMatrix t = es.vectors * inv_sqrt.asDiagonal() * es.vectors.adjoint();
    std::vector<ComplexMatrix> p;
    p.reserve(count);
    for (const auto& ai : a) p.emplace_back(hermitize(t * ai * t));
    return Povm(std::move(p));
  }
  throw Error("random_povm: sum of draws stayed singular after retries");
}

}  // namespace qssa

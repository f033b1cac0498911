#pragma once

// Entropy functionals, all in nats.

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "qssa/linalg.hpp"
#include "qssa/operators.hpp"

namespace qssa {

struct EntropyValue {
  double nats = 0.0;
  /// False only for a relative entropy whose support condition fails; nats
  /// is then +infinity.
  bool finite = true;

  static EntropyValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }
  operator double() const { return nats; }
};

/// Outcome probabilities below this contribute nothing to Shannon sums.
inline constexpr double kProbabilityFloor = 1e-15;
/// Weight of rho outside supp(sigma) above which H(rho, sigma) is infinite.
inline constexpr double kSupportLeakTol = 1e-9;

namespace detail {

inline double neg_xlogx(double x, double floor) { return x < floor ? 0.0 : -x * std::log(x); }

/// -sum lambda ln lambda over a spectrum, dropping eigenvalues under the clamp.
inline double spectral_entropy(const RealVector& spectrum) {
  if (spectrum.size() == 0) return 0.0;
  const double floor = clamp_threshold(spectrum.maxCoeff());
  double s = 0.0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) s += neg_xlogx(spectrum[i], floor);
  return s;
}

/// -sum p ln p with no normalisation requirement.
inline double shannon_sum(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += neg_xlogx(x, kProbabilityFloor);
  return s;
}

}  // namespace detail

inline EntropyValue von_neumann(const DensityMatrix& rho) {
  return {detail::spectral_entropy(rho.spectrum()), true};
}

/// -Tr X ln X for a Hermitian PSD matrix of any trace.
inline double operator_entropy(const ComplexMatrix& x) {
  return detail::spectral_entropy(hermitian_eigenvalues(x));
}

inline EntropyValue shannon(std::span<const double> p) {
  double total = 0.0;
  for (double x : p) {
    if (x < -1e-12) throw Error("shannon: negative probability " + std::to_string(x));
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error("shannon: probabilities sum to " + std::to_string(total));
  return {detail::shannon_sum(p), true};
}

/// H(rho, sigma) = Tr rho (ln rho - ln sigma), evaluated in sigma's eigenbasis.
inline EntropyValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw Error("relative_entropy: dimension mismatch");
  const auto es = hermitian_eig(sigma.mat());
  const double floor = clamp_threshold(es.values.maxCoeff());
  const RealVector weights = (es.vectors.adjoint() * rho.mat() * es.vectors).diagonal().real();

  double leaked = 0.0;
  double cross = 0.0;  // Tr rho ln sigma
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (es.values[i] < floor)
      leaked += weights[i];
    else
      cross += weights[i] * std::log(es.values[i]);
  }
  if (leaked > kSupportLeakTol) return EntropyValue::infinite();
  return {-von_neumann(rho).nats - cross, true};
}

/// S1 + S2 - S12 of a bipartite state.
inline EntropyValue mutual_information(const DensityMatrix& rho12) {
  if (rho12.dims().factors() != 2) throw Error("mutual_information: need exactly 2 factors");
  return {von_neumann(partial_trace(rho12, {1})) + von_neumann(partial_trace(rho12, {2})) -
              von_neumann(rho12),
          true};
}

/// r(a) = Tr P^a rho.
inline std::vector<double> outcome_distribution(const ComplexMatrix& rho, const Povm& p) {
  if (static_cast<std::size_t>(rho.rows()) != p.dim())
    throw Error("outcome_distribution: POVM dimension mismatch");
  std::vector<double> r;
  r.reserve(p.size());
  for (const auto& e : p.elements) r.push_back(e.transpose().cwiseProduct(rho).sum().real());
  return r;
}

/// r(a, b) = Tr (P^a (x) Q^b) rho12, flattened as a * |Q| + b.
inline std::vector<double> outcome_distribution(const DensityMatrix& rho12, const Povm& p,
                                                const Povm& q) {
  if (rho12.dims().factors() != 2) throw Error("outcome_distribution: need exactly 2 factors");
  if (p.dim() != rho12.dims()[1] || q.dim() != rho12.dims()[2])
    throw Error("outcome_distribution: POVM dimension mismatch");
  std::vector<double> r;
  r.reserve(p.size() * q.size());
  for (const auto& pa : p.elements)
    for (const auto& qb : q.elements)
      r.push_back(kron(pa, qb).transpose().cwiseProduct(rho12.mat()).sum().real());
  return r;
}

/// Classical entropy of a single system under a partition of unity.
inline EntropyValue classical_entropy(const DensityMatrix& rho, const Povm& p) {
  const auto r = outcome_distribution(rho.mat(), p);
  return shannon(r);
}

/// Classical entropy of the joint outcome distribution of P (x) Q.
inline EntropyValue classical_entropy(const DensityMatrix& rho12, const Povm& p, const Povm& q) {
  const auto r = outcome_distribution(rho12, p, q);
  return shannon(r);
}

/// Tr_1 (P^a (x) I) rho12 for each element; each block has trace n^a.
inline std::vector<ComplexMatrix> povm_blocks(const DensityMatrix& rho12, const Povm& p) {
  if (rho12.dims().factors() != 2) throw Error("povm_blocks: need exactly 2 factors");
  const auto& dims = rho12.dims();
  if (p.dim() != dims[1]) throw Error("povm_blocks: POVM dimension mismatch");
  const auto n2 = static_cast<Eigen::Index>(dims[2]);
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(p.size());
  for (const auto& e : p.elements) {
    const ComplexMatrix lifted = kron(e, ComplexMatrix::Identity(n2, n2)) * rho12.mat();
    blocks.push_back(hermitize(partial_trace(lifted, dims, {2})));
  }
  return blocks;
}

/// S^{cl,Q}[rho12] = -sum_a Tr_2 X_a ln X_a with X_a = Tr_1 P^a rho12.
inline EntropyValue classical_quantum_entropy(const DensityMatrix& rho12, const Povm& p) {
  double s = 0.0;
  for (const auto& x : povm_blocks(rho12, p)) s += operator_entropy(x);
  return {s, true};
}

}  // namespace qssa

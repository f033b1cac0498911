#pragma once

// Post-measurement ensembles {(n^a, rho23^a, rho2^a)} and the block-diagonal
// CPT map rho123 -> (+)_a n^a rho23^a.

#include <cmath>
#include <vector>

#include "qssa/entropy.hpp"
#include "qssa/linalg.hpp"
#include "qssa/operators.hpp"

namespace qssa {

/// Terms with n^a below this (relative to Tr rho) are dropped from ensembles.
inline constexpr double kWeightThreshold = 1e-12;
/// Above this total dimension the Kraus action is applied by index arithmetic
/// instead of materialising K (x) I.
inline constexpr std::size_t kDenseKrausLimit = 16;

/// max-abs entry of sum K^dagger K - I.
inline double check_completeness(const KrausSet& k) {
  const auto n = static_cast<Eigen::Index>(k.dim());
  return max_abs_diff(k.gram(), ComplexMatrix::Identity(n, n));
}

namespace detail {

// Number of leading factors K acts on; only prefixes {1}, {1,2}, ... are valid.
inline std::size_t kraus_prefix(const KrausSet& k, const HilbertDims& dims) {
  for (std::size_t i = 0; i < k.acts_on.size(); ++i)
    if (k.acts_on[i] != i + 1)
      throw Error("Kraus operators must act on a leading block of factors such as {1} or {1,2}");
  const std::size_t prefix = k.acts_on.size();
  if (prefix > dims.factors()) throw Error("Kraus acts_on exceeds the number of factors");
  std::size_t d = 1;
  for (std::size_t l = 1; l <= prefix; ++l) d *= dims[l];
  if (d != k.dim())
    throw Error("Kraus dimension " + std::to_string(k.dim()) +
                " does not match the factors it acts on");
  return prefix;
}

inline ComplexMatrix apply_kraus_dense(const ComplexMatrix& k, const ComplexMatrix& rho) {
  const auto b = rho.rows() / k.rows();
  const ComplexMatrix e = kron(k, ComplexMatrix::Identity(b, b));
  return e * rho * e.adjoint();
}

// (K (x) I_b) rho (K (x) I_b)^dagger without forming the Kronecker product.
inline ComplexMatrix apply_kraus_indexed(const ComplexMatrix& k, const ComplexMatrix& rho) {
  const Eigen::Index a = k.rows();
  const Eigen::Index b = rho.rows() / a;
  const Eigen::Index n = rho.rows();
  ComplexMatrix left = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index m = 0; m < a; ++m) {
      const Complex kim = k(i, m);
      if (kim == Complex{}) continue;
      left.middleRows(i * b, b) += kim * rho.middleRows(m * b, b);
    }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < a; ++j)
    for (Eigen::Index m = 0; m < a; ++m) {
      const Complex kjm = std::conj(k(j, m));
      if (kjm == Complex{}) continue;
      out.middleCols(j * b, b) += kjm * left.middleCols(m * b, b);
    }
  return out;
}

}  // namespace detail

/// K rho K^dagger with K extended by the identity on the untouched factors.
inline ComplexMatrix apply_kraus(const ComplexMatrix& k, const DensityMatrix& rho) {
  if (rho.dim() % static_cast<std::size_t>(k.rows()) != 0)
    throw Error("apply_kraus: operator does not divide the state dimension");
  return rho.dim() > kDenseKrausLimit ? detail::apply_kraus_indexed(k, rho.mat())
                                      : detail::apply_kraus_dense(k, rho.mat());
}

struct MeasurementEnsemble {
  struct Entry {
    std::size_t index;  // position in the Kraus set
    double weight;      // n^a
    DensityMatrix rho23;
    DensityMatrix rho2;
  };
  std::vector<Entry> entries;
  std::size_t skipped = 0;
  double skipped_mass = 0.0;
  double completeness_residual = 0.0;

  double total_weight() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
  }
};

namespace detail {

inline void require_tripartite(const DensityMatrix& rho123, const KrausSet& k) {
  if (rho123.dims().factors() != 3) throw Error("need a state on exactly 3 factors");
  kraus_prefix(k, rho123.dims());
}

inline double require_complete(const KrausSet& k) {
  const double residual = check_completeness(k);
  if (residual > k.tol)
    throw Error("Kraus set is not complete: residual " + std::to_string(residual));
  return residual;
}

}  // namespace detail

/// Weights n^a = Tr K^a rho K^a* and normalised conditional states
/// rho23^a = Tr_1 K^a rho K^a* / n^a, rho2^a = Tr_3 rho23^a.
inline MeasurementEnsemble measurement_ensemble(const DensityMatrix& rho123, const KrausSet& k) {
  detail::require_tripartite(rho123, k);
  MeasurementEnsemble ens;
  ens.completeness_residual = detail::require_complete(k);

  const auto& dims = rho123.dims();
  const HilbertDims dims23{dims[2], dims[3]};
  const double cutoff = kWeightThreshold * rho123.trace();
  for (std::size_t a = 0; a < k.size(); ++a) {
    const ComplexMatrix post = apply_kraus(k.ops[a], rho123);
    const double n = post.trace().real();
    if (n < cutoff) {
      ++ens.skipped;
      ens.skipped_mass += std::max(n, 0.0);
      continue;
    }
    DensityMatrix rho23(partial_trace(post, dims, {2, 3}) / n, dims23);
    DensityMatrix rho2 = partial_trace(rho23, {1});
    ens.entries.push_back({a, n, std::move(rho23), std::move(rho2)});
  }
  return ens;
}

/// (+)_a Tr_1 K^a rho123 K^a*, a block-diagonal state on C^M (x) H2 (x) H3.
inline DensityMatrix cpt_phi(const DensityMatrix& rho123, const KrausSet& k) {
  detail::require_tripartite(rho123, k);
  detail::require_complete(k);
  const auto& dims = rho123.dims();
  const auto block = static_cast<Eigen::Index>(dims[2] * dims[3]);
  const auto m = static_cast<Eigen::Index>(k.size());
  ComplexMatrix out = ComplexMatrix::Zero(m * block, m * block);
  for (Eigen::Index a = 0; a < m; ++a) {
    const ComplexMatrix post = apply_kraus(k.ops[static_cast<std::size_t>(a)], rho123);
    out.block(a * block, a * block, block, block) = partial_trace(post, dims, {2, 3});
  }
  DensityOptions opts = rho123.options();
  opts.unnormalized = opts.unnormalized || std::abs(rho123.trace() - 1.0) > opts.trace_tol;
  return DensityMatrix(out, HilbertDims{k.size(), dims[2], dims[3]}, opts);
}

/// K^a = (P^a)^{1/2}.
inline KrausSet povm_to_kraus(const Povm& p, std::vector<std::size_t> acts_on = {1}) {
  std::vector<ComplexMatrix> ops;
  ops.reserve(p.size());
  for (const auto& e : p.elements) {
    if (hermitian_eigenvalues(e)[0] < -p.tol)
      throw Error("povm_to_kraus: element is not positive semi-definite");
    ops.push_back(matrix_fn(e, [](double x) { return std::sqrt(std::max(x, 0.0)); }));
  }
  return KrausSet(std::move(ops), std::move(acts_on), p.tol);
}

}  // namespace qssa

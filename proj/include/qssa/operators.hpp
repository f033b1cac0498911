#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qssa/linalg.hpp"

namespace qssa {

/// Finite family of square operators {K^a}. Completeness (sum K^dagger K = I)
/// is not enforced here; operations that require it check it against `tol`.
struct KrausSet {
  std::vector<ComplexMatrix> ops;
  /// 1-based tensor factors the operators act on, e.g. {1, 2} or {1}.
  std::vector<std::size_t> acts_on{1};
  double tol = 1e-10;

  KrausSet() = default;
  KrausSet(std::vector<ComplexMatrix> k, std::vector<std::size_t> on, double t = 1e-10)
      : ops(std::move(k)), acts_on(std::move(on)), tol(t) {
    if (ops.empty()) throw Error("KrausSet: need at least one operator");
    if (acts_on.empty()) throw Error("KrausSet: acts_on is empty");
    const auto n = ops.front().rows();
    for (const auto& k : ops)
      if (k.rows() != n || k.cols() != n)
        throw Error("KrausSet: operators must be square and share dimensions");
  }

  std::size_t dim() const { return static_cast<std::size_t>(ops.front().rows()); }
  std::size_t size() const { return ops.size(); }

  /// sum K^dagger K.
  ComplexMatrix gram() const {
    ComplexMatrix g = ComplexMatrix::Zero(ops.front().cols(), ops.front().cols());
    for (const auto& k : ops) g += k.adjoint() * k;
    return g;
  }
};

/// Partition of unity: positive semi-definite elements summing to I.
struct Povm {
  std::vector<ComplexMatrix> elements;
  double tol = 1e-10;

  Povm() = default;
  explicit Povm(std::vector<ComplexMatrix> e, double t = 1e-10) : elements(std::move(e)), tol(t) {
    if (elements.empty()) throw Error("Povm: need at least one element");
    const auto n = elements.front().rows();
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (auto& p : elements) {
      if (p.rows() != n || p.cols() != n)
        throw Error("Povm: elements must be square and share dimensions");
      p = hermitize(p);
      const double min_eig = hermitian_eigenvalues(p)[0];
      if (min_eig < -tol)
        throw Error("Povm: element has negative eigenvalue " + std::to_string(min_eig));
      sum += p;
    }
    const double residual = max_abs_diff(sum, ComplexMatrix::Identity(n, n));
    if (residual > tol)
      throw Error("Povm: elements sum to identity only within " + std::to_string(residual));
  }

  std::size_t dim() const { return static_cast<std::size_t>(elements.front().rows()); }
  std::size_t size() const { return elements.size(); }
};

/// {I}: the trivial partition.
inline Povm trivial_povm(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Povm({ComplexMatrix::Identity(n, n)});
}

/// Rank-1 projectors onto the computational basis.
inline Povm basis_povm(std::size_t dim) {
  std::vector<ComplexMatrix> e;
  for (std::size_t k = 0; k < dim; ++k) {
    const auto v = basis_vector(dim, k);
    e.emplace_back(v * v.adjoint());
  }
  return Povm(std::move(e));
}

/// {I} acting on the given factors.
inline KrausSet identity_kraus(std::size_t dim, std::vector<std::size_t> acts_on) {
  const auto n = static_cast<Eigen::Index>(dim);
  return KrausSet({ComplexMatrix::Identity(n, n)}, std::move(acts_on));
}

/// |i><i| (x) |j><j| on factors {1, 2}, ordered by i * d2 + j.
inline KrausSet product_basis_projectors(std::size_t d1, std::size_t d2) {
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j) {
      const auto v = basis_vector(d1 * d2, i * d2 + j);
      ops.emplace_back(v * v.adjoint());
    }
  return KrausSet(std::move(ops), {1, 2});
}

}  // namespace qssa

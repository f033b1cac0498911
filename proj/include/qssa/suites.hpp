#pragma once

// Seeded check suites: each suite draws `trials` instances from
// Seed(base).derive(suite index).derive(instance index) and returns its
// reports ordered by instance, so parallel evaluation never changes output.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qssa/checks.hpp"
#include "qssa/randgen.hpp"
#include "qssa/report.hpp"
#include "qssa/wehrl.hpp"

namespace qssa {

inline constexpr std::array<std::string_view, 14> kSuiteNames{
    "ssa",         "stronger-ssa", "sandwich", "concavity", "gibbs",
    "cpt",         "improved-subadd", "mutual-info", "cq-chain", "cqq",
    "convexity",   "holevo",       "wehrl",    "counterexample"};

struct SuiteConfig {
  std::vector<std::string> suites{"all"};
  HilbertDims dims{2, 2, 2};
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  double rel_tol = kDefaultRelTol;
  /// Counterexample dimension; unset runs d = 2..6.
  std::optional<std::size_t> d;
  int two_j = 1;
  /// 0 = hardware concurrency, further capped by QSSA_THREADS.
  std::size_t threads = 0;
};

inline std::optional<std::size_t> suite_index(std::string_view name) {
  const auto it = std::find(kSuiteNames.begin(), kSuiteNames.end(), name);
  if (it == kSuiteNames.end()) return std::nullopt;
  return static_cast<std::size_t>(it - kSuiteNames.begin());
}

inline std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QSSA_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers; rethrows the
/// first exception.
template <typename F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  pool.clear();
  if (error) std::rethrow_exception(error);
}

namespace detail {

inline std::vector<InequalityReport> run_instance(std::string_view suite, const SuiteConfig& cfg,
                                                  std::size_t i, Seed seed) {
  const auto& dims = cfg.dims;
  if (dims.factors() != 3) throw Error("suites need --dims with exactly 3 factors");
  const std::size_t d1 = dims[1], d2 = dims[2];
  const HilbertDims dims12{d1, d2};
  const double tol = cfg.rel_tol;
  static constexpr std::array<std::size_t, 3> kCounts{1, 2, 4};
  const std::size_t count = kCounts[i % kCounts.size()];
  std::vector<InequalityReport> out;

  if (suite == "ssa") {
    const std::size_t rank = i % 2 == 0 ? dims.total() : std::max<std::size_t>(1, dims.total() / 2);
    out.push_back(check_ssa(random_density(dims, rank, seed), tol));
  } else if (suite == "stronger-ssa") {
    out.push_back(check_stronger_ssa(random_density(dims, seed.derive(0)),
                                     random_kraus(d1 * d2, count, seed.derive(1), {1, 2}), tol));
  } else if (suite == "sandwich") {
    auto pair = check_sandwich(random_density(dims, seed.derive(0)),
                               random_kraus(d1, count, seed.derive(1), {1}), tol);
    out.push_back(std::move(pair.left));
    out.push_back(std::move(pair.right));
  } else if (suite == "concavity") {
    const auto [a, b] = random_concavity_pair(d1, 1 + i % 3, seed);
    out.push_back(check_concave_map(a, b, kDefaultLambdas, tol));
  } else if (suite == "gibbs") {
    out.push_back(check_gibbs_variational(random_density(dims, seed.derive(0)),
                                          random_hermitian(dims.total(), seed.derive(1)), tol));
  } else if (suite == "cpt") {
    out.push_back(check_cpt_monotonicity(random_density(dims, seed.derive(0)),
                                         random_kraus(d1 * d2, count, seed.derive(1), {1, 2}),
                                         tol));
  } else if (suite == "improved-subadd") {
    auto pair = check_improved_subadd(random_density(dims12, seed.derive(0)),
                                      random_povm(d1, 1 + i % 4, seed.derive(1)), tol);
    out.push_back(std::move(pair.left));
    out.push_back(std::move(pair.right));
  } else if (suite == "mutual-info") {
    out.push_back(check_classical_mutual_info(random_density(dims12, seed.derive(0)),
                                              random_povm(d1, 1 + i % 4, seed.derive(1)),
                                              random_povm(d2, 1 + (i / 4) % 4, seed.derive(2)),
                                              tol));
  } else if (suite == "cq-chain") {
    auto pair = check_cq_chain(random_density(dims12, seed.derive(0)),
                               random_povm(d1, 1 + i % 4, seed.derive(1)),
                               random_povm(d2, 1 + (i / 4) % 4, seed.derive(2)), tol);
    out.push_back(std::move(pair.left));
    out.push_back(std::move(pair.right));
  } else if (suite == "cqq") {
    out.push_back(check_cqq(random_density(dims, seed.derive(0)),
                            random_povm(d1, 1 + i % 4, seed.derive(1)), tol));
  } else if (suite == "convexity") {
    out.push_back(check_convexity_cl_minus_q(random_density(dims12, seed.derive(0)),
                                             random_density(dims12, seed.derive(1)),
                                             random_povm(d1, 1 + i % 4, seed.derive(2)),
                                             kDefaultLambdas, tol));
  } else if (suite == "holevo") {
    const std::size_t members = 2 + i % 3;
    const auto weights = random_probabilities(members, seed.derive(0));
    std::vector<DensityMatrix> states;
    for (std::size_t k = 0; k < members; ++k)
      states.push_back(random_density(HilbertDims{d1}, seed.derive(1 + k)));
    out.push_back(check_holevo(weights, states, random_povm(d1, d1 + 1, seed.derive(100)), tol));
  } else if (suite == "wehrl") {
    const SpinJ spin(cfg.two_j);
    const HilbertDims one{spin.dim()};
    const DensityMatrix rho = random_density(one, 1 + i % spin.dim(), seed.derive(0));
    const double sw = wehrl_entropy(rho);
    auto bound = make_report("wehrl-bound", von_neumann(rho), sw, Relation::le, tol);
    bound.dims = one.list();
    out.push_back(std::move(bound));
    out.push_back(check_wehrl_convexity(rho, random_density(one, seed.derive(1)),
                                        kDefaultLambdas, tol));
    out.push_back(check_wehrl_mutual_info(
        random_density(HilbertDims{spin.dim(), spin.dim()}, seed.derive(2)), tol));
  }
  for (auto& r : out) r.seed = seed.value;
  return out;
}

inline InequalityReport counterexample_report(std::size_t d) {
  const auto ce = counterexample_two_sided(d);
  auto r = make_report("counterexample", ce.lhs, ce.rhs, Relation::ge);
  r.status = Status::expected_violation;
  r.dims = {d, d};
  r.meta["expected_gap"] = std::log(static_cast<double>(d));
  r.meta["gap_residual"] = std::abs(ce.lhs - ce.rhs - std::log(static_cast<double>(d)));
  return r;
}

}  // namespace detail

/// Reports for one named suite (not "all").
inline std::vector<InequalityReport> run_suite(std::string_view suite, const SuiteConfig& cfg) {
  const auto index = suite_index(suite);
  if (!index) throw Error("unknown suite: " + std::string(suite));
  if (suite == "counterexample") {
    std::vector<InequalityReport> out;
    if (cfg.d) {
      out.push_back(detail::counterexample_report(*cfg.d));
    } else {
      for (std::size_t d = 2; d <= 6; ++d) out.push_back(detail::counterexample_report(d));
    }
    return out;
  }
  if (cfg.trials < 1) throw Error("trials must be >= 1");
  const Seed base = Seed{cfg.seed}.derive(*index);
  std::vector<std::vector<InequalityReport>> per(cfg.trials);
  parallel_for(cfg.trials, worker_count(cfg.threads), [&](std::size_t i) {
    per[i] = detail::run_instance(suite, cfg, i, base.derive(i));
  });
  std::vector<InequalityReport> out;
  for (auto& v : per)
    for (auto& r : v) {
      r.meta["instance"] = static_cast<std::int64_t>(&v - per.data());
      out.push_back(std::move(r));
    }
  return out;
}

/// Expands "all" and validates names; throws Error on an unknown suite.
inline std::vector<std::string> expand_suites(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(out.end(), kSuiteNames.begin(), kSuiteNames.end());
    } else if (suite_index(n)) {
      out.push_back(n);
    } else {
      throw Error("unknown suite: " + n);
    }
  }
  return out;
}

inline std::vector<InequalityReport> run_suites(const SuiteConfig& cfg) {
  std::vector<InequalityReport> out;
  for (const auto& s : expand_suites(cfg.suites)) {
    auto reports = run_suite(s, cfg);
    out.insert(out.end(), std::make_move_iterator(reports.begin()),
               std::make_move_iterator(reports.end()));
  }
  return out;
}

}  // namespace qssa

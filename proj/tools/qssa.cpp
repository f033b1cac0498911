// qssa: generate seeded instances, run entropy-inequality check suites, and
// scan Wehrl entropies of spin states.
//
//   qssa check --suite ssa --dims 2,2,2 --trials 100 --seed 7
//   qssa gen --kind density --dims 2,2 --seed 1 --out rho.json
//   qssa wehrl --two-j 4 --trials 1000 --seed 3 --out scan.csv
//
// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qssa/io.hpp"
#include "qssa/suites.hpp"
#include "qssa/wehrl.hpp"

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

qssa::HilbertDims parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  for (const auto& part : split(s, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(part, &pos);
    } catch (const std::exception&) {
      throw UsageError("invalid --dims entry '" + part + "'");
    }
    if (pos != part.size() || v < 1) throw UsageError("invalid --dims entry '" + part + "'");
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw UsageError("--dims is empty");
  return qssa::HilbertDims(std::move(dims));
}

/// Writes to `path`, or stdout when the path is empty.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw IoError("write to " + path + " failed");
}

struct CheckArgs {
  std::string suites = "all";
  std::string dims = "2,2,2";
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::optional<std::size_t> d;
  int two_j = 1;
  std::string out;
  std::string format = "json";
};

int cmd_check(const CheckArgs& a) {
  qssa::SuiteConfig cfg;
  cfg.suites = split(a.suites, ',');
  if (cfg.suites.empty()) throw UsageError("--suite is empty");
  try {
    qssa::expand_suites(cfg.suites);
  } catch (const qssa::Error& e) {
    throw UsageError(e.what());
  }
  cfg.dims = parse_dims(a.dims);
  if (cfg.dims.factors() != 3) throw UsageError("--dims needs exactly 3 factors");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  if (a.tol) cfg.rel_tol = *a.tol;
  cfg.d = a.d;
  if (a.d && *a.d < 2) throw UsageError("--d must be >= 2");
  if (a.two_j < 0) throw UsageError("--two-j must be >= 0");
  cfg.two_j = a.two_j;

  const auto reports = qssa::run_suites(cfg);
  std::ostringstream os;
  if (a.format == "csv") {
    os << qssa::io::kReportCsvHeader << '\n';
    for (const auto& r : reports) os << qssa::io::to_csv_row(r) << '\n';
  } else {
    for (const auto& r : reports) os << qssa::io::to_json(r).dump() << '\n';
  }
  write_output(a.out, os.str());

  std::size_t failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.status == qssa::Status::skipped)
      ++skipped;
    else if (!r.pass)
      ++failed;
  }
  std::cerr << reports.size() << " reports, " << failed << " failed, " << skipped << " skipped\n";
  return failed ? kExitFailed : 0;
}

struct GenArgs {
  std::string kind;
  std::string dims = "2";
  std::uint64_t seed = 0;
  std::size_t count = 2;
  std::optional<std::size_t> rank;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const auto dims = parse_dims(a.dims);
  const qssa::Seed seed{a.seed};
  std::vector<std::size_t> all_factors;
  for (std::size_t l = 1; l <= dims.factors(); ++l) all_factors.push_back(l);

  qssa::io::Json j;
  if (a.kind == "density") {
    const std::size_t rank = a.rank.value_or(dims.total());
    if (rank < 1 || rank > dims.total()) throw UsageError("--rank out of range");
    j = qssa::io::to_json(qssa::random_density(dims, rank, seed));
  } else if (a.kind == "kraus") {
    if (a.count < 1) throw UsageError("--count must be >= 1");
    j = qssa::io::to_json(qssa::random_kraus(dims.total(), a.count, seed, all_factors));
  } else if (a.kind == "povm") {
    if (a.count < 1) throw UsageError("--count must be >= 1");
    j = qssa::io::to_json(qssa::random_povm(dims.total(), a.count, seed), all_factors);
  } else if (a.kind == "cq") {
    if (dims.factors() != 3) throw UsageError("cq states need --dims with 3 factors");
    j = qssa::io::to_json(qssa::random_cq_state(dims, seed));
  } else {
    throw UsageError("unknown --kind '" + a.kind + "' (density|kraus|povm|cq)");
  }
  write_output(a.out, j.dump() + "\n");
  return 0;
}

struct WehrlArgs {
  int two_j = 1;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::string out;
  bool emit_husimi = false;
};

int cmd_wehrl(const WehrlArgs& a) {
  if (a.two_j < 0) throw UsageError("--two-j must be >= 0");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  const qssa::SpinJ spin(a.two_j);
  const auto scan = qssa::wehrl_min_scan(spin, a.trials, qssa::Seed{a.seed});

  using qssa::io::format_double;
  std::ostringstream os;
  os << "trial,seed,two_j,S_W,S,diff\n";
  for (const auto& row : scan.rows)
    os << row.trial << ',' << row.seed << ',' << row.two_j << ',' << format_double(row.wehrl)
       << ',' << format_double(row.entropy) << ',' << format_double(row.diff) << '\n';
  write_output(a.out, os.str());

  if (a.emit_husimi) {
    // Husimi function of the state attaining the minimum.
    std::size_t best = 0;
    for (std::size_t t = 0; t < scan.rows.size(); ++t)
      if (scan.rows[t].wehrl < scan.rows[best].wehrl) best = t;
    const auto rho = qssa::random_density(qssa::HilbertDims{spin.dim()}, 1,
                                          qssa::Seed{scan.rows[best].seed});
    const auto grid = qssa::entropy_grid(spin);
    const auto field = qssa::husimi(rho.mat(), grid);
    std::ostringstream hs;
    hs << "trial,theta,phi,weight,h\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      hs << best << ',' << format_double(grid.theta[i]) << ',' << format_double(grid.phi[i]) << ','
         << format_double(grid.weights[i]) << ',' << format_double(field.values[i]) << '\n';
    write_output(a.out.empty() ? std::string("husimi.csv") : a.out + ".husimi.csv", hs.str());
  }

  auto& summary = a.out.empty() ? std::cerr : std::cout;
  summary << "min_S_W=" << format_double(scan.min_wehrl)
          << " coherent=" << format_double(scan.coherent_value)
          << " margin=" << format_double(scan.margin)
          << " resolution_residual=" << format_double(scan.resolution_residual) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy inequality checks on finite-dimensional quantum states"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Run check suites and emit one report per instance");
  c->add_option("--suite", check.suites,
                "Comma-separated suites: ssa, stronger-ssa, sandwich, concavity, gibbs, cpt, "
                "improved-subadd, mutual-info, cq-chain, cqq, convexity, holevo, wehrl, "
                "counterexample, all");
  c->add_option("--dims", check.dims, "Tensor factor dims, e.g. 2,2,2");
  c->add_option("--trials", check.trials, "Instances per suite");
  c->add_option("--seed", check.seed, "Base seed");
  c->add_option("--tol", check.tol, "Relative tolerance coefficient (default 1e-8)");
  c->add_option("--d", check.d, "Dimension for the counterexample suite");
  c->add_option("--two-j", check.two_j, "Spin 2j for the wehrl suite");
  c->add_option("--out", check.out, "Output path (default stdout)");
  c->add_option("--format", check.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a seeded random object as JSON");
  g->add_option("--kind", gen.kind, "density, kraus, povm or cq")->required();
  g->add_option("--dims", gen.dims, "Tensor factor dims");
  g->add_option("--seed", gen.seed, "Seed");
  g->add_option("--count", gen.count, "Number of Kraus operators or POVM elements");
  g->add_option("--rank", gen.rank, "Rank of a generated density matrix");
  g->add_option("--out", gen.out, "Output path (default stdout)");

  WehrlArgs wehrl;
  auto* w = app.add_subcommand("wehrl", "Scan Wehrl entropies of random pure spin states");
  w->add_option("--two-j", wehrl.two_j, "Spin 2j");
  w->add_option("--trials", wehrl.trials, "Number of random pure states");
  w->add_option("--seed", wehrl.seed, "Seed");
  w->add_option("--out", wehrl.out, "CSV output path (default stdout)");
  w->add_flag("--emit-husimi", wehrl.emit_husimi,
              "Also dump the Husimi function of the minimising state as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c) return cmd_check(check);
    if (*g) return cmd_gen(gen);
    if (*w) return cmd_wehrl(wehrl);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}

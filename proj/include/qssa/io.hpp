#pragma once

// JSON forms:
//   ComplexMatrix  {"rows":n,"cols":m,"re":[[...]],"im":[[...]]}
//   DensityMatrix  ComplexMatrix fields plus "dims":[d1,...]
//   KrausSet/Povm  {"acts_on":[1,2],"ops":[ComplexMatrix,...]}
//   Report         {"name","seed","dims","lhs","rhs","slack","tol","pass","status","meta"}
// Doubles are written in shortest round-trip form, so reloading is exact.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qssa/linalg.hpp"
#include "qssa/operators.hpp"
#include "qssa/report.hpp"

namespace qssa::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows) ||
        im.size() != static_cast<std::size_t>(rows))
      throw Error("matrix JSON: row count mismatch");
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto& rr = re[static_cast<std::size_t>(i)];
      const auto& ir = im[static_cast<std::size_t>(i)];
      if (rr.size() != static_cast<std::size_t>(cols) || ir.size() != static_cast<std::size_t>(cols))
        throw Error("matrix JSON: column count mismatch");
      for (Eigen::Index c = 0; c < cols; ++c)
        m(i, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(),
                          ir[static_cast<std::size_t>(c)].get<double>());
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("matrix JSON: ") + e.what());
  }
}

inline Json to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.mat());
  j["dims"] = rho.dims().list();
  return j;
}

inline DensityMatrix density_from_json(const Json& j) {
  try {
    return DensityMatrix(matrix_from_json(j), HilbertDims(j.at("dims").get<std::vector<std::size_t>>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("density JSON: ") + e.what());
  }
}

inline Json operators_to_json(const std::vector<ComplexMatrix>& ops,
                              const std::vector<std::size_t>& acts_on) {
  Json arr = Json::array();
  for (const auto& k : ops) arr.push_back(to_json(k));
  return Json{{"acts_on", acts_on}, {"ops", std::move(arr)}};
}

inline Json to_json(const KrausSet& k) { return operators_to_json(k.ops, k.acts_on); }

inline Json to_json(const Povm& p, const std::vector<std::size_t>& acts_on = {1}) {
  return operators_to_json(p.elements, acts_on);
}

inline std::vector<ComplexMatrix> operators_from_json(const Json& j) {
  std::vector<ComplexMatrix> ops;
  try {
    for (const auto& o : j.at("ops")) ops.push_back(matrix_from_json(o));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("operator set JSON: ") + e.what());
  }
  return ops;
}

inline KrausSet kraus_from_json(const Json& j) {
  return KrausSet(operators_from_json(j), j.at("acts_on").get<std::vector<std::size_t>>());
}

inline Povm povm_from_json(const Json& j) { return Povm(operators_from_json(j)); }

inline Json meta_to_json(const std::map<std::string, MetaValue>& meta) {
  Json j = Json::object();
  for (const auto& [key, value] : meta)
    std::visit([&, &k = key](const auto& v) { j[k] = v; }, value);
  return j;
}

inline Json to_json(const InequalityReport& r) {
  return Json{{"name", r.name},
              {"seed", r.seed},
              {"dims", r.dims},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"slack", r.slack},
              {"tol", r.tol},
              {"pass", r.pass},
              {"status", to_string(r.status)},
              {"relation", to_string(r.relation)},
              {"meta", meta_to_json(r.meta)}};
}

/// printf("%.17g"), the fixed-width form used in CSV output.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline const char* kReportCsvHeader = "name,seed,dims,lhs,rhs,slack,tol,pass,status,relation,meta";

/// One CSV row; dims are ';'-joined and meta flattens to key=value pairs.
inline std::string to_csv_row(const InequalityReport& r) {
  std::ostringstream os;
  os << r.name << ',' << r.seed << ',';
  for (std::size_t i = 0; i < r.dims.size(); ++i) os << (i ? ";" : "") << r.dims[i];
  os << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
     << format_double(r.slack) << ',' << format_double(r.tol) << ','
     << (r.pass ? "true" : "false") << ',' << to_string(r.status) << ','
     << to_string(r.relation) << ',';
  bool first = true;
  for (const auto& [key, value] : r.meta) {
    os << (first ? "" : ";") << key << '=';
    first = false;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            os << format_double(v);
          else
            os << v;
        },
        value);
  }
  return os.str();
}

}  // namespace qssa::io

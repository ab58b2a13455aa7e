#include "dppmix/model_spec.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dppmix/families.hpp"

namespace dppmix {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& origin,
                  const std::string& ctx) {
  if (!j.is_object()) fail(origin, ctx + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(origin, ctx + " is missing '" + key + "'");
  return *it;
}

double as_number(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_number()) fail(origin, ctx + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_number_integer()) fail(origin, ctx + " must be an integer");
  return j.get<int>();
}

std::vector<double> as_vector(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_array()) fail(origin, ctx + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(origin, ctx + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd as_matrix(const json& j, const std::string& origin, const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(origin, ctx + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::vector<double> row = as_vector(j[static_cast<std::size_t>(r)], origin,
                                              ctx + " row " + std::to_string(r));
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      if (cols == 0) fail(origin, ctx + " rows must be non-empty");
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      fail(origin, ctx + " rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

ConcavePhi parse_phi(const json& j, const std::string& origin, const std::string& ctx) {
  const json& kind_j = field(j, "kind", origin, ctx);
  if (!kind_j.is_string()) fail(origin, ctx + ".kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "sqrt") return ConcavePhi::sqrt_shift();
  if (kind == "log1p") return ConcavePhi::log1p();
  if (kind == "linear_capped")
    return ConcavePhi::linear_capped(
        as_number(field(j, "theta", origin, ctx), origin, ctx + ".theta"));
  if (kind == "quadratic")
    return ConcavePhi::quadratic(as_number(field(j, "p", origin, ctx), origin, ctx + ".p"),
                                 as_number(field(j, "q", origin, ctx), origin, ctx + ".q"));
  if (kind == "table")
    return ConcavePhi::table(as_vector(field(j, "values", origin, ctx), origin, ctx + ".values"));
  fail(origin, ctx + ".kind '" + kind + "' is not a known concave shape");
}

std::shared_ptr<const SetFunction> parse_function(const json& j, int n,
                                                  const std::string& origin) {
  const std::string ctx = "function";
  const json& type_j = field(j, "type", origin, ctx);
  if (!type_j.is_string()) fail(origin, ctx + ".type must be a string");
  const std::string type = type_j.get<std::string>();

  if (type == "modular") {
    auto w = as_vector(field(j, "weights", origin, ctx), origin, ctx + ".weights");
    if (static_cast<int>(w.size()) != n) fail(origin, ctx + ".weights must have ground.n entries");
    return std::make_shared<ModularFunction>(std::move(w));
  }
  if (type == "pair_tweak") {
    auto w = as_vector(field(j, "weights", origin, ctx), origin, ctx + ".weights");
    if (static_cast<int>(w.size()) != n) fail(origin, ctx + ".weights must have ground.n entries");
    const json& pair = field(j, "pair", origin, ctx);
    if (!pair.is_array() || pair.size() != 2)
      fail(origin, ctx + ".pair must be an array of two site indices");
    const int k = as_int(pair[0], origin, ctx + ".pair[0]");
    const int kp = as_int(pair[1], origin, ctx + ".pair[1]");
    return std::make_shared<PairTweakFunction>(std::move(w), k, kp);
  }
  if (type == "facility_location") {
    Eigen::MatrixXd values = as_matrix(field(j, "values", origin, ctx), origin, ctx + ".values");
    if (values.cols() != n) fail(origin, ctx + ".values must have ground.n columns");
    double lambda = 0.0;
    if (const auto it = j.find("lambda"); it != j.end())
      lambda = as_number(*it, origin, ctx + ".lambda");
    return std::make_shared<FacilityLocation>(std::move(values), lambda);
  }
  if (type == "graph_cut") {
    Eigen::MatrixXd w = as_matrix(field(j, "weights", origin, ctx), origin, ctx + ".weights");
    if (w.rows() != n) fail(origin, ctx + ".weights must be ground.n x ground.n");
    const double a = as_number(field(j, "a", origin, ctx), origin, ctx + ".a");
    const double b = as_number(field(j, "b", origin, ctx), origin, ctx + ".b");
    const double c = as_number(field(j, "c", origin, ctx), origin, ctx + ".c");
    return std::make_shared<GraphCutFunction>(std::move(w), a, b, c);
  }
  if (type == "log_det") {
    Eigen::MatrixXd kernel = as_matrix(field(j, "kernel", origin, ctx), origin, ctx + ".kernel");
    if (kernel.rows() != n) fail(origin, ctx + ".kernel must be ground.n x ground.n");
    return std::make_shared<LogDetFunction>(std::move(kernel));
  }
  if (type == "decomposable") {
    const json& sets_j = field(j, "sets", origin, ctx);
    if (!sets_j.is_array() || sets_j.empty())
      fail(origin, ctx + ".sets must be a non-empty array of index arrays");
    std::vector<Subset> cover;
    cover.reserve(sets_j.size());
    for (std::size_t a = 0; a < sets_j.size(); ++a) {
      const std::string sctx = ctx + ".sets[" + std::to_string(a) + "]";
      if (!sets_j[a].is_array()) fail(origin, sctx + " must be an array of site indices");
      std::uint64_t bits = 0;
      for (const auto& v : sets_j[a]) {
        const int i = as_int(v, origin, sctx);
        if (i < 0 || i >= n) fail(origin, sctx + " has a site outside the ground set");
        bits |= std::uint64_t{1} << i;
      }
      cover.push_back(Subset::from_bits(bits));
    }
    std::vector<ConcavePhi> phis;
    if (const auto it = j.find("phis"); it != j.end()) {
      if (!it->is_array() || it->size() != cover.size())
        fail(origin, ctx + ".phis must list one shape per set");
      for (std::size_t a = 0; a < it->size(); ++a)
        phis.push_back(
            parse_phi((*it)[a], origin, ctx + ".phis[" + std::to_string(a) + "]"));
    } else {
      const ConcavePhi phi = parse_phi(field(j, "phi", origin, ctx), origin, ctx + ".phi");
      phis.assign(cover.size(), phi);
    }
    return std::make_shared<DecomposableFunction>(n, std::move(cover), std::move(phis));
  }
  if (type == "mean_field_ising") {
    const double coupling =
        as_number(field(j, "coupling", origin, ctx), origin, ctx + ".coupling");
    return std::make_shared<DecomposableFunction>(
        DecomposableFunction::mean_field_ising(n, coupling));
  }
  fail(origin, ctx + ".type '" + type + "' is not a known family");
}

}  // namespace

PointProcess parse_model(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  const int version = as_int(field(j, "schema_version", origin, "model"), origin,
                             "schema_version");
  if (version != 1) fail(origin, "unsupported schema_version " + std::to_string(version));

  const json& ground_j = field(j, "ground", origin, "model");
  const int n = as_int(field(ground_j, "n", origin, "ground"), origin, "ground.n");
  if (n < 1 || n > 64) fail(origin, "ground.n must be between 1 and 64");
  std::vector<std::string> labels;
  if (const auto it = ground_j.find("labels"); it != ground_j.end()) {
    if (!it->is_array()) fail(origin, "ground.labels must be an array of strings");
    for (const auto& v : *it) {
      if (!v.is_string()) fail(origin, "ground.labels must contain only strings");
      labels.push_back(v.get<std::string>());
    }
    if (static_cast<int>(labels.size()) != n)
      fail(origin, "ground.labels must have ground.n entries");
  }

  const double beta = as_number(field(j, "beta", origin, "model"), origin, "beta");
  if (!(beta > 0.0)) fail(origin, "beta must be positive");

  std::shared_ptr<const SetFunction> f;
  try {
    f = parse_function(field(j, "function", origin, "model"), n, origin);
  } catch (const std::invalid_argument& e) {
    fail(origin, std::string("function rejected: ") + e.what());
  } catch (const std::domain_error& e) {
    fail(origin, std::string("function rejected: ") + e.what());
  }
  return PointProcess(std::move(f), beta, GroundSet(n, std::move(labels)));
}

PointProcess load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open model file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path);
}

}  // namespace dppmix

#include "nestedot/json_io.hpp"

#include <string>

#include "nestedot/error.hpp"

namespace nestedot::cli {
namespace {

Matrix matrix_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw Error(ErrorCode::InvalidArgument, std::string(field) + " rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw Error(ErrorCode::InvalidArgument, std::string(field) + " entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

GaussianSpec gaussian_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "Gaussian spec must be a JSON object");
  GaussianSpec spec;
  if (!j.contains("mean") || !j["mean"].is_array()) throw Error(ErrorCode::InvalidArgument, "missing 'mean' array");
  for (const auto& v : j["mean"]) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "'mean' entries must be numbers");
    spec.mean.push_back(v.get<double>());
  }
  spec.dim = j.value("d", std::size_t{1});
  spec.steps = j.value("T", spec.dim ? spec.mean.size() / spec.dim : 0);
  if (j.contains("factor")) spec.factor = matrix_from_json(j["factor"], "factor");
  if (j.contains("covariance")) spec.covariance = matrix_from_json(j["covariance"], "covariance");
  spec.validate();
  return spec;
}

nlohmann::json to_json(const GaussianSpec& spec) {
  nlohmann::json j;
  j["mean"] = spec.mean;
  if (spec.factor) j["factor"] = matrix_to_json(*spec.factor);
  if (spec.covariance) j["covariance"] = matrix_to_json(*spec.covariance);
  j["d"] = spec.dim;
  j["T"] = spec.steps;
  return j;
}

nlohmann::json to_json(const TreeStats& stats) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [branching, count] : stats.branching_histogram) hist[std::to_string(branching)] = count;
  return {{"nodes_per_depth", stats.nodes_per_depth}, {"branching_histogram", hist}};
}

nlohmann::json to_json(const AwResult& result) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : result.stage_stats)
    stages.push_back({{"depth", s.depth}, {"node_pairs", s.node_pairs}, {"wall_ms", s.wall_ms}});
  return {{"aw2_squared", result.aw2_squared},
          {"n_mu", result.n_mu},
          {"n_nu", result.n_nu},
          {"delta_mu", result.delta_mu},
          {"delta_nu", result.delta_nu},
          {"mode", std::string(to_string(result.mode))},
          {"stage_stats", stages}};
}

}  // namespace nestedot::cli

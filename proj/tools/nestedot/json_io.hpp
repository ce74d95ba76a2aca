#pragma once

#include <json.hpp>

#include "nestedot/gaussian_oracle.hpp"
#include "nestedot/nested_dp.hpp"
#include "nestedot/prefix_tree.hpp"

namespace nestedot::cli {

// {"mean": [...], "factor": [[...]] | "covariance": [[...]], "d": 1, "T": 3}
GaussianSpec gaussian_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GaussianSpec& spec);

nlohmann::json to_json(const TreeStats& stats);
nlohmann::json to_json(const AwResult& result);

}  // namespace nestedot::cli

#pragma once

// JSON form of bodies: {"family": name, "params": {...}}.
//
//   ball                  {dim, radius}
//   ellipsoid             {matrix: [[..],..]} or {diag: [..]}
//   spheroid              {axis, equatorial, polar}
//   revolution            {axis, profile: [c0, c1, ..]}   polynomial profiles only
//   harmonic_perturbation {base, axis, odd_coeffs, epsilon}
//   minkowski_sum         {members: [..]}
//   homothet              {base, lambda, translation}
//   erosion               {base, radius}
//   projection            {base, frame: [[..],..]}        n x k, row-major

#include <json.hpp>

#include "cvxtomo/body.hpp"

namespace cvxtomo {

// Throws std::invalid_argument (with a JSON-path hint) on malformed specs.
ConvexBody body_from_json(const nlohmann::json& desc);
nlohmann::json body_to_json(const ConvexBody& body);

Eigen::VectorXd vector_from_json(const nlohmann::json& j);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);

}  // namespace cvxtomo

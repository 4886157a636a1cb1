#include "cvxtomo/body_json.hpp"

#include <stdexcept>
#include <string>

namespace cvxtomo {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const json& field(const json& params, const char* key, const std::string& family) {
  if (!params.is_object() || !params.contains(key))
    throw std::invalid_argument(family + ": missing parameter \"" + key + "\"");
  return params.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw std::invalid_argument(what + ": expected a number");
  return j.get<double>();
}

}  // namespace

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a nonempty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw std::invalid_argument("expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = vector_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw std::invalid_argument("matrix rows differ in length");
    m.row(r) = row.transpose();
  }
  return m;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

ConvexBody body_from_json(const json& desc) {
  if (!desc.is_object() || !desc.contains("family") || !desc.at("family").is_string())
    throw std::invalid_argument("body desc needs a string \"family\"");
  const std::string family = desc.at("family").get<std::string>();
  const json params = desc.value("params", json::object());

  if (family == "ball") {
    const json& d = field(params, "dim", family);
    if (!d.is_number_integer()) throw std::invalid_argument("ball: dim must be an integer");
    return ConvexBody::ball(d.get<int>(), number(field(params, "radius", family), "ball.radius"));
  }
  if (family == "ellipsoid") {
    if (params.contains("diag")) return ConvexBody::ellipsoid(vector_from_json(params.at("diag")).asDiagonal());
    return ConvexBody::ellipsoid(matrix_from_json(field(params, "matrix", family)));
  }
  if (family == "spheroid")
    return ConvexBody::spheroid(vector_from_json(field(params, "axis", family)),
                                number(field(params, "equatorial", family), "spheroid.equatorial"),
                                number(field(params, "polar", family), "spheroid.polar"));
  if (family == "revolution") {
    const auto c = vector_from_json(field(params, "profile", family));
    return ConvexBody::revolution(vector_from_json(field(params, "axis", family)),
                                  Profile::from_polynomial(std::vector<double>(c.data(), c.data() + c.size())));
  }
  if (family == "harmonic_perturbation") {
    const auto c = vector_from_json(field(params, "odd_coeffs", family));
    return ConvexBody::harmonic_perturbation(body_from_json(field(params, "base", family)),
                                             vector_from_json(field(params, "axis", family)),
                                             std::vector<double>(c.data(), c.data() + c.size()),
                                             number(field(params, "epsilon", family), "epsilon"));
  }
  if (family == "minkowski_sum") {
    const json& members = field(params, "members", family);
    if (!members.is_array()) throw std::invalid_argument("minkowski_sum: members must be an array");
    std::vector<ConvexBody> bodies;
    for (const auto& m : members) bodies.push_back(body_from_json(m));
    return ConvexBody::minkowski_sum(std::move(bodies));
  }
  if (family == "homothet") {
    const ConvexBody base = body_from_json(field(params, "base", family));
    const Eigen::VectorXd t = params.contains("translation") ? vector_from_json(params.at("translation"))
                                                             : Eigen::VectorXd::Zero(base.dim());
    return ConvexBody::homothet(base, number(field(params, "lambda", family), "homothet.lambda"), t);
  }
  if (family == "erosion")
    return ConvexBody::erosion(body_from_json(field(params, "base", family)),
                               number(field(params, "radius", family), "erosion.radius"));
  if (family == "projection")
    return ConvexBody::projection(body_from_json(field(params, "base", family)),
                                  matrix_from_json(field(params, "frame", family)));
  throw std::invalid_argument("unknown body family \"" + family + "\"");
}

json body_to_json(const ConvexBody& body) {
  return std::visit(
      overloaded{
          [](const family::Ball& b) {
            return json{{"family", "ball"}, {"params", {{"dim", b.dim}, {"radius", b.radius}}}};
          },
          [](const family::Ellipsoid& e) {
            return json{{"family", "ellipsoid"}, {"params", {{"matrix", to_json(e.shape)}}}};
          },
          [](const family::Spheroid& s) {
            return json{{"family", "spheroid"},
                        {"params", {{"axis", to_json(s.axis)}, {"equatorial", s.equatorial}, {"polar", s.polar}}}};
          },
          [](const family::Revolution& r) {
            if (r.profile.polynomial.empty())
              throw std::invalid_argument("only polynomial revolution profiles serialize to JSON");
            return json{{"family", "revolution"}, {"params", {{"axis", to_json(r.axis)}, {"profile", r.profile.polynomial}}}};
          },
          [](const family::HarmonicPerturbation& h) {
            return json{{"family", "harmonic_perturbation"},
                        {"params",
                         {{"base", body_to_json(*h.base)},
                          {"axis", to_json(h.axis)},
                          {"odd_coeffs", h.odd_coeffs},
                          {"epsilon", h.epsilon}}}};
          },
          [](const family::MinkowskiSum& m) {
            json members = json::array();
            for (const auto& b : m.members) members.push_back(body_to_json(b));
            return json{{"family", "minkowski_sum"}, {"params", {{"members", members}}}};
          },
          [](const family::Homothet& h) {
            return json{{"family", "homothet"},
                        {"params",
                         {{"base", body_to_json(*h.base)}, {"lambda", h.lambda}, {"translation", to_json(h.translation)}}}};
          },
          [](const family::Erosion& e) {
            return json{{"family", "erosion"}, {"params", {{"base", body_to_json(*e.base)}, {"radius", e.radius}}}};
          },
          [](const family::Projection& p) {
            return json{{"family", "projection"},
                        {"params", {{"base", body_to_json(*p.base)}, {"frame", to_json(p.frame)}}}};
          },
      },
      body.data());
}

}  // namespace cvxtomo

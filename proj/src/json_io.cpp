#include "corrlab/json_io.hpp"

#include <stdexcept>

namespace corrlab {

namespace {

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw JsonError("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw JsonError("matrix: expected nested arrays of [re, im]");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[static_cast<std::size_t>(r)].size()) != cols)
      throw JsonError("matrix: ragged rows");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  }
  if (!is_finite(m)) throw JsonError("matrix: non-finite entries");
  return m;
}

Json vector_to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw JsonError("vector: expected array of [re, im]");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json algebra_to_json(const Algebra& a) {
  Json blocks = Json::array();
  for (const auto& blk : a.blocks())
    blocks.push_back(Json{{"size", blk.size}, {"multiplicity", blk.multiplicity}});
  return Json{{"blocks", std::move(blocks)}};
}

AlgebraPtr algebra_from_json(const Json& j) {
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw JsonError("algebra: expected non-empty \"blocks\" array");
  std::vector<BlockSpec> specs;
  for (const auto& b : j["blocks"])
    specs.push_back({b.at("size").get<Index>(), b.at("multiplicity").get<Index>()});
  return make_multimatrix(specs);
}

Json module_to_json(const ConcreteModule& e) {
  Json gens = Json::array();
  for (const auto& x : e.span.basis()) gens.push_back(matrix_to_json(x));
  return Json{{"algebra", algebra_to_json(*e.algebra)},
              {"target_dim", e.target_dim},
              {"generators", std::move(gens)}};
}

ConcreteModule module_from_json(const Json& j, const Tolerance& tol) {
  const auto b = algebra_from_json(j.at("algebra"));
  const Index target = j.at("target_dim").get<Index>();
  std::vector<CMatrix> gens;
  for (const auto& g : j.at("generators")) gens.push_back(matrix_from_json(g));
  return make_module(b, target, gens, tol);
}

Json cp_map_to_json(const CPMap& t) {
  Json out{{"source", algebra_to_json(*t.source)}, {"target", algebra_to_json(*t.target)}};
  if (!t.kraus.empty()) {
    Json k = Json::array();
    for (const auto& v : t.kraus) k.push_back(matrix_to_json(v));
    out["kraus"] = std::move(k);
  } else {
    Json a = Json::array();
    for (const auto& v : t.action) a.push_back(matrix_to_json(v));
    out["action"] = std::move(a);
  }
  return out;
}

CPMap cp_map_from_json(const Json& j, const Tolerance& tol) {
  const auto source = algebra_from_json(j.at("source"));
  const auto target = algebra_from_json(j.at("target"));
  if (j.contains("kraus")) {
    std::vector<CMatrix> kraus;
    for (const auto& v : j["kraus"]) kraus.push_back(matrix_from_json(v));
    return cp_from_kraus(source, target, std::move(kraus), tol);
  }
  if (j.contains("action")) {
    std::vector<CMatrix> action;
    for (const auto& v : j["action"]) action.push_back(matrix_from_json(v));
    return cp_from_action(source, target, std::move(action), tol);
  }
  throw JsonError("cp map: expected \"kraus\" or \"action\"");
}

Json correspondence_to_json(const Correspondence& e) {
  Json gens = Json::array();
  for (const auto& x : e.module.span.basis()) gens.push_back(matrix_to_json(x));
  Json left = Json::array();
  for (const auto& l : e.left_images) left.push_back(matrix_to_json(l));
  return Json{{"left", algebra_to_json(*e.left)},
              {"right", algebra_to_json(*e.right)},
              {"target_dim", e.h()},
              {"generators", std::move(gens)},
              {"left_action", std::move(left)}};
}

Correspondence correspondence_from_json(const Json& j, const Tolerance& tol) {
  if (j.contains("random")) {
    // Seed-generated fixture: the GNS module of a random unital CP map.
    const auto& r = j["random"];
    const auto b = algebra_from_json(r.at("algebra"));
    return random_correspondence(b, r.value("dim_cap", Index{12}),
                                 r.at("seed").get<std::uint64_t>(), tol);
  }
  const auto left = algebra_from_json(j.at("left"));
  const auto right = algebra_from_json(j.at("right"));
  const Index target = j.at("target_dim").get<Index>();
  std::vector<CMatrix> gens;
  for (const auto& g : j.at("generators")) gens.push_back(matrix_from_json(g));
  const auto e = make_module(right, target, gens, tol);
  std::vector<CMatrix> images;
  for (const auto& l : j.at("left_action")) images.push_back(matrix_from_json(l));
  return make_correspondence(left, e, images, tol);
}

Json multiplicity_to_json(const MultiplicityMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.entries.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.entries.cols(); ++j) row.push_back(m.entries(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json powers_to_json(const PowersMap& p) {
  return Json{{"g_dim", p.g_dim},
              {"factor1", Json{{"k", p.d1.k}, {"omega", vector_to_json(p.d1.omega)}}},
              {"factor2", Json{{"k", p.d2.k}, {"omega", vector_to_json(p.d2.omega)}}}};
}

PowersMap powers_from_json(const Json& j, const Tolerance& tol) {
  SpatialDatum d1, d2;
  d1.k = j.at("factor1").at("k").get<Index>();
  d1.omega = vector_from_json(j.at("factor1").at("omega"));
  d2.k = j.at("factor2").at("k").get<Index>();
  d2.omega = vector_from_json(j.at("factor2").at("omega"));
  return build_powers_map(j.at("g_dim").get<Index>(), std::move(d1), std::move(d2), tol);
}

}  // namespace corrlab

#include "spw/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spw {

namespace {

using nlohmann::json;

json complex_matrix_to_json(const CMat& m) {
  // Row-major rows of [re, im] pairs.
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) {
      const cdbl v = m(r, c);
      row.push_back(json::array({v.real(), v.imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat complex_matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw std::invalid_argument("model json: matrix must be a non-empty array of rows");
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(rows[0].size());
  CMat m(nr, nc);
  for (int r = 0; r < nr; ++r) {
    if (static_cast<int>(rows[r].size()) != nc)
      throw std::invalid_argument("model json: ragged matrix rows");
    for (int c = 0; c < nc; ++c) {
      const json& cell = rows[r][c];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument("model json: matrix entries must be [re, im]");
      m(r, c) = cdbl(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

}  // namespace

void SpectralModel::validate(const Tolerances& tol) const {
  if (dim <= 0) throw std::invalid_argument("model: dim must be positive");
  if (static_cast<int>(sqrt_eigenvalues.size()) != dim)
    throw std::invalid_argument("model: sqrt_eigenvalues size != dim");

  double prev = -1.0;
  for (double v : sqrt_eigenvalues) {
    if (!std::isfinite(v)) throw std::invalid_argument("model: non-finite eigenvalue");
    if (v < 0.0) throw std::invalid_argument("model: negative sqrt eigenvalue");
    if (v < prev) throw std::invalid_argument("model: sqrt_eigenvalues not ascending");
    prev = v;
  }

  if (!generators.empty()) {
    const double lam_max = max_sqrt_eigenvalue();
    const double scale = std::max(1.0, lam_max * lam_max);
    // L = -sum_j D_j^2 must reproduce diag(lambda_i^2).
    CMat sum(dim, dim);
    for (const CMat& d : generators) {
      if (d.rows != dim || d.cols != dim)
        throw std::invalid_argument("model: generator has wrong shape");
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
          if (std::abs(d(r, c) + std::conj(d(c, r))) > tol.algebraic * scale)
            throw std::invalid_argument("model: generator not skew-Hermitian");
      const CMat d2 = matmul(d, d);
      for (size_t i = 0; i < sum.a.size(); ++i) sum.a[i] -= d2.a[i];
    }
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const cdbl want = (r == c) ? cdbl(sqrt_eigenvalues[r] * sqrt_eigenvalues[r]) : cdbl(0.0);
        if (std::abs(sum(r, c) - want) > tol.algebraic * scale)
          throw std::invalid_argument("model: generators do not reassemble the operator");
      }
  }

  if (nodes) {
    const int m = nodes->count();
    if (m <= 0) throw std::invalid_argument("model: empty node set");
    if (static_cast<int>(nodes->points.size()) != m)
      throw std::invalid_argument("model: node point/weight count mismatch");
    for (double w : nodes->weights)
      if (!(w > 0.0)) throw std::invalid_argument("model: node weights must be positive");
    if (nodes->eval.rows != dim || nodes->eval.cols != m)
      throw std::invalid_argument("model: eval matrix has wrong shape");
  }
}

std::string model_to_json(const SpectralModel& model) {
  json j;
  j["dim"] = model.dim;
  j["sqrt_eigenvalues"] = model.sqrt_eigenvalues;
  if (!model.generators.empty()) {
    json gens = json::array();
    for (const CMat& d : model.generators) gens.push_back(complex_matrix_to_json(d));
    j["generators"] = std::move(gens);
  }
  if (model.nodes) {
    json n;
    n["points"] = model.nodes->points;
    n["weights"] = model.nodes->weights;
    n["eval_matrix"] = complex_matrix_to_json(model.nodes->eval);
    j["nodes"] = std::move(n);
  }
  // Descriptive extras; readers that only know the core fields can ignore
  // them, and load_model restores them when present.
  j["kind"] = model.kind;
  j["min_sampling_order"] = model.min_sampling_order;
  return j.dump(2) + "\n";
}

SpectralModel model_from_json(const std::string& text) {
  json j = json::parse(text);
  SpectralModel model;
  model.dim = j.at("dim").get<int>();
  model.sqrt_eigenvalues = j.at("sqrt_eigenvalues").get<std::vector<double>>();
  if (j.contains("generators"))
    for (const json& g : j["generators"]) model.generators.push_back(complex_matrix_from_json(g));
  if (j.contains("nodes")) {
    NodeData nd;
    nd.points = j["nodes"].at("points").get<std::vector<std::vector<double>>>();
    nd.weights = j["nodes"].at("weights").get<std::vector<double>>();
    nd.eval = complex_matrix_from_json(j["nodes"].at("eval_matrix"));
    model.nodes = std::move(nd);
  }
  if (j.contains("kind")) model.kind = j["kind"].get<std::string>();
  if (j.contains("min_sampling_order"))
    model.min_sampling_order = j["min_sampling_order"].get<double>();
  model.validate();
  return model;
}

void save_model(const SpectralModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(model);
}

SpectralModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace spw

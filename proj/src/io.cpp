#include "locckit/io.hpp"

#include <fstream>

namespace locckit::io {

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j, const std::string& name) {
  if (!j.is_array() || j.empty())
    throw ParseError("matrix '" + name + "': expected a non-empty array of rows");
  const size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError("matrix '" + name + "': row 0 must be a non-empty array");
  const size_t cols = j[0].size();
  Mat m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError("matrix '" + name + "': row " + std::to_string(i) +
                       " has mismatched length");
    for (size_t c = 0; c < cols; ++c) {
      const Json& e = j[i][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("matrix '" + name + "': entry (" + std::to_string(i) + "," +
                         std::to_string(c) + ") must be a [re, im] pair");
      m(i, c) = Scalar(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!m.allFinite()) throw ParseError("matrix '" + name + "': non-finite entries");
  return m;
}

ProblemFile parse_problem(const Json& j) {
  ProblemFile pf;
  if (!j.is_object()) throw ParseError("problem file: top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_string())
    throw ParseError("problem file: missing schema_version");
  pf.schema_version = j["schema_version"].get<std::string>();
  if (pf.schema_version != kSchemaVersion)
    throw ParseError("problem file: unrecognized schema_version '" + pf.schema_version + "'");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ParseError("problem file: missing kind");
  pf.kind = j["kind"].get<std::string>();
  if (pf.kind != "state_set" && pf.kind != "code_space" && pf.kind != "stabilizer_params" &&
      pf.kind != "channel_check")
    throw ParseError("problem file: unknown kind '" + pf.kind + "'");

  if (j.contains("dims")) {
    const Json& d = j["dims"];
    if (!d.is_object() || !d.contains("a") || !d.contains("b"))
      throw ParseError("problem file: dims must be an object with fields a and b");
    pf.dim_a = d["a"].get<Eigen::Index>();
    pf.dim_b = d["b"].get<Eigen::Index>();
    if (pf.dim_a < 1 || pf.dim_b < 1) throw ParseError("problem file: dims must be positive");
  }
  if (j.contains("matrices")) {
    if (!j["matrices"].is_object()) throw ParseError("problem file: matrices must be an object");
    for (const auto& [name, value] : j["matrices"].items())
      pf.matrices[name] = matrix_from_json(value, name);
  }
  auto read_names = [&](const char* field, std::vector<std::string>& out) {
    if (!j.contains(field)) return;
    if (!j[field].is_array())
      throw ParseError(std::string("problem file: ") + field + " must be an array of names");
    for (const Json& name : j[field]) {
      if (!name.is_string())
        throw ParseError(std::string("problem file: ") + field + " entries must be strings");
      out.push_back(name.get<std::string>());
    }
  };
  read_names("states", pf.states);
  read_names("code_basis", pf.code_basis);
  read_names("kraus", pf.kraus);
  if (j.contains("complement_of")) pf.complement_of = j["complement_of"].get<std::string>();
  if (j.contains("n")) pf.n = j["n"].get<int>();
  if (j.contains("k")) pf.k = j["k"].get<int>();
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (o.contains("tol_abs")) pf.tol_abs = o["tol_abs"].get<double>();
    if (o.contains("tol_rel")) pf.tol_rel = o["tol_rel"].get<double>();
    if (o.contains("seed")) pf.seed = o["seed"].get<unsigned>();
  }

  for (const std::string& name : pf.states) resolve(pf, name);
  for (const std::string& name : pf.code_basis) resolve(pf, name);
  for (const std::string& name : pf.kraus) resolve(pf, name);
  if (pf.complement_of) resolve(pf, *pf.complement_of);
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("problem file '" + path + "': " + e.what());
  }
  return parse_problem(j);
}

const Mat& resolve(const ProblemFile& pf, const std::string& name) {
  auto it = pf.matrices.find(name);
  if (it == pf.matrices.end())
    throw ParseError("problem file: reference to undefined matrix '" + name + "'");
  return it->second;
}

bipartite::StateSet load_state_set(const ProblemFile& pf, const Tolerance& tol) {
  if (pf.states.empty()) throw ParseError("state_set problem: no states listed");
  if (pf.dim_a < 1 || pf.dim_b < 1) throw ParseError("state_set problem: dims required");
  std::vector<Mat> ops;
  for (const std::string& name : pf.states) ops.push_back(resolve(pf, name));
  try {
    return bipartite::state_set_from_operators(ops, pf.dim_a, pf.dim_b, tol);
  } catch (const Error& e) {
    throw ParseError(std::string("state_set problem: ") + e.what());
  }
}

Vec load_vector(const ProblemFile& pf, const std::string& name) {
  const Mat& m = resolve(pf, name);
  if (m.cols() != 1) throw ParseError("matrix '" + name + "' must be a column vector");
  return m.col(0);
}

qec::CodeSpace load_code_space(const ProblemFile& pf, const Tolerance& tol) {
  std::vector<Vec> basis;
  if (pf.complement_of) {
    Vec phi = load_vector(pf, *pf.complement_of);
    if (!tol.scalar_close(phi.norm(), 1.0))
      throw ParseError("complement_of state must be a unit vector");
    Mat p = Mat::Identity(phi.size(), phi.size()) - phi * phi.adjoint();
    linalg::HermitianEig eig = linalg::eig_hermitian(p, tol);
    for (Eigen::Index i = 0; i < phi.size(); ++i)
      if (eig.eigenvalues[i] > 0.5) basis.push_back(eig.eigenvectors.col(i));
  } else {
    for (const std::string& name : pf.code_basis) basis.push_back(load_vector(pf, name));
  }
  if (basis.empty()) throw ParseError("code_space problem: no code basis");
  try {
    return qec::make_code_space(basis, tol);
  } catch (const Error& e) {
    throw ParseError(std::string("code_space problem: ") + e.what());
  }
}

channels::KrausChannel load_kraus_channel(const ProblemFile& pf) {
  if (pf.kraus.empty()) throw ParseError("channel_check problem: no Kraus operators listed");
  std::vector<Mat> kraus;
  for (const std::string& name : pf.kraus) kraus.push_back(resolve(pf, name));
  try {
    return channels::make_channel(std::move(kraus));
  } catch (const Error& e) {
    throw ParseError(std::string("channel_check problem: ") + e.what());
  }
}

Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Vec vector_from_json(const Json& j, const std::string& name) {
  if (!j.is_array()) throw ParseError("vector '" + name + "': expected array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    if (!e.is_array() || e.size() != 2)
      throw ParseError("vector '" + name + "': entries must be [re, im] pairs");
    v(i) = Scalar(e[0].get<double>(), e[1].get<double>());
  }
  return v;
}

Json protocol_to_json(const locc::Protocol& p) {
  Json alice = Json::array();
  for (const Vec& v : p.alice_basis) alice.push_back(vector_to_json(v));
  Json bob = Json::array();
  for (const auto& outcome : p.bob_bases) {
    Json per = Json::array();
    for (const Vec& v : outcome) per.push_back(vector_to_json(v));
    bob.push_back(std::move(per));
  }
  return Json{{"alice_basis", std::move(alice)}, {"bob_bases", std::move(bob)}};
}

locc::Protocol protocol_from_json(const Json& j) {
  locc::Protocol p;
  if (!j.contains("alice_basis") || !j.contains("bob_bases"))
    throw ParseError("protocol witness: alice_basis and bob_bases required");
  for (const Json& v : j["alice_basis"]) p.alice_basis.push_back(vector_from_json(v, "alice"));
  for (const Json& outcome : j["bob_bases"]) {
    std::vector<Vec> per;
    for (const Json& v : outcome) per.push_back(vector_from_json(v, "bob"));
    p.bob_bases.push_back(std::move(per));
  }
  return p;
}

std::string verdict_name(locc::Status status) {
  switch (status) {
    case locc::Status::Distinguishable: return "distinguishable";
    case locc::Status::NotDistinguishable: return "not_distinguishable";
    default: return "inconclusive";
  }
}

int verdict_exit_code(locc::Status status) {
  switch (status) {
    case locc::Status::Distinguishable: return 0;
    case locc::Status::NotDistinguishable: return 1;
    default: return 2;
  }
}

Json verdict_report(const std::string& command, const locc::Verdict& verdict,
                    const Tolerance& tol, unsigned seed) {
  Json report;
  report["tool"] = "locckit";
  report["version"] = kToolVersion;
  report["command"] = command;
  report["verdict"] = verdict_name(verdict.status);
  report["exit_code"] = verdict_exit_code(verdict.status);
  report["diagnostics"] = verdict.diagnostics;
  report["residuals"] = Json{{"max_residual", verdict.residual}};
  Json witness;
  if (verdict.protocol) {
    witness["type"] = "protocol";
    witness["protocol"] = protocol_to_json(*verdict.protocol);
  } else if (verdict.separating_vector) {
    witness["type"] = "separating_vector";
    witness["separating_vector"] = vector_to_json(*verdict.separating_vector);
  } else if (verdict.structure) {
    witness["type"] = "structure";
  } else if (verdict.schmidt_rank_certificate) {
    witness["type"] = "schmidt_rank";
  } else {
    witness["type"] = "none";
  }
  if (verdict.structure) {
    Json blocks = Json::array();
    for (auto [m, n] : verdict.structure->blocks) blocks.push_back(Json::array({m, n}));
    witness["structure"] = std::move(blocks);
  }
  if (verdict.schmidt_rank_certificate)
    witness["schmidt_rank"] = *verdict.schmidt_rank_certificate;
  report["witness"] = std::move(witness);
  report["provenance"] =
      Json{{"seed", seed}, {"tol_abs", tol.absolute}, {"tol_rel", tol.relative}};
  return report;
}

}  // namespace locckit::io

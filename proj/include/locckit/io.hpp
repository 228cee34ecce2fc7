#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locckit/bipartite.hpp"
#include "locckit/channels.hpp"
#include "locckit/linalg.hpp"
#include "locckit/locc.hpp"
#include "locckit/qec.hpp"

namespace locckit::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Structured problem input: named complex matrices (entries as [re, im]
/// pairs) plus the role assignments for one of the supported kinds.
struct ProblemFile {
  std::string schema_version;
  std::string kind;  // state_set | code_space | stabilizer_params | channel_check
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  std::map<std::string, Mat> matrices;
  std::vector<std::string> states;      // state_set: operator names (op_form)
  std::vector<std::string> code_basis;  // code_space / channel_check: vector names
  std::vector<std::string> kraus;       // channel_check: Kraus operator names
  std::optional<std::string> complement_of;  // code_space: the excluded state
  int n = 0, k = 0;                          // stabilizer_params
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
  std::optional<unsigned> seed;
};

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j, const std::string& name);

ProblemFile parse_problem(const Json& j);
ProblemFile load_problem(const std::string& path);

/// Named matrix lookup with ParseError context.
const Mat& resolve(const ProblemFile& pf, const std::string& name);

bipartite::StateSet load_state_set(const ProblemFile& pf, const Tolerance& tol);
qec::CodeSpace load_code_space(const ProblemFile& pf, const Tolerance& tol);
channels::KrausChannel load_kraus_channel(const ProblemFile& pf);
Vec load_vector(const ProblemFile& pf, const std::string& name);

Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j, const std::string& name);

Json protocol_to_json(const locc::Protocol& p);
locc::Protocol protocol_from_json(const Json& j);

Json verdict_report(const std::string& command, const locc::Verdict& verdict,
                    const Tolerance& tol, unsigned seed);

std::string verdict_name(locc::Status status);
int verdict_exit_code(locc::Status status);

}  // namespace locckit::io

// End-to-end tests of the command-line tool: exit codes, report format,
// determinism, and the verify round-trip.

#include <catch2/catch.hpp>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string bin() {
  const char* b = std::getenv("LOCCKIT_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::string fixtures() {
  const char* f = std::getenv("LOCCKIT_FIXTURES");
  REQUIRE(f != nullptr);
  return f;
}

int run(const std::string& args) {
  std::string cmd = bin() + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("analyze: Bell pair is distinguishable with a protocol witness", "[cli]") {
  std::string report = "/tmp/locckit_bell_report.json";
  CHECK(run("analyze " + fixtures() + "/bell_pair.json --out " + report) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["verdict"] == "distinguishable");
  CHECK(j["witness"]["type"] == "protocol");
  // Computational Alice basis distinguishes the Bell pair.
  auto alice = j["witness"]["protocol"]["alice_basis"];
  REQUIRE(alice.size() == 2);
}

TEST_CASE("analyze: full Pauli basis is not distinguishable", "[cli]") {
  std::string report = "/tmp/locckit_pauli_report.json";
  CHECK(run("analyze " + fixtures() + "/full_pauli.json --out " + report) == 1);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["verdict"] == "not_distinguishable");
  CHECK(j["witness"]["structure"] == nlohmann::json::parse("[[2,1]]"));
}

TEST_CASE("analyze: malformed matrix exits with the parse code", "[cli]") {
  CHECK(run("analyze " + fixtures() + "/malformed.json") == 3);
}

TEST_CASE("analyze: schmidt-rank obstruction on a complement problem", "[cli]") {
  CHECK(run("analyze " + fixtures() + "/complement_qutrit.json") == 1);
}

TEST_CASE("kl-check: Bell example is correctable with lambda = I/2", "[cli]") {
  std::string report = "/tmp/locckit_kl_report.json";
  CHECK(run("kl-check " + fixtures() + "/bell_kl.json --out " + report) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["verdict"] == "correctable");
  double l00 = j["lambda"][0][0][0].get<double>();
  double l01 = j["lambda"][0][1][0].get<double>();
  CHECK(l00 == Approx(0.5).margin(1e-12));
  CHECK(l01 == Approx(0.0).margin(1e-12));
}

TEST_CASE("kl-check: computational code fails", "[cli]") {
  CHECK(run("kl-check " + fixtures() + "/bad_code_kl.json") == 1);
}

TEST_CASE("kl-check: tolerance flag flips a boundary fixture", "[cli]") {
  CHECK(run("kl-check " + fixtures() + "/boundary_kl.json") == 1);
  CHECK(run("kl-check " + fixtures() + "/boundary_kl.json --tol-abs 1e-4") == 0);
}

TEST_CASE("find-basis solves the worked qutrit example", "[cli]") {
  std::string report = "/tmp/locckit_fb_report.json";
  CHECK(run("find-basis " + fixtures() + "/qutrit_triple.json --out " + report) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["verdict"] == "distinguishable");
  CHECK(j["witness"]["type"] == "protocol");
  CHECK(j["residuals"]["max_residual"].get<double>() <= 1e-8);
}

TEST_CASE("stabilizer subcommand matches the theorem", "[cli]") {
  CHECK(run("stabilizer --n 2 --k 1") == 0);
  CHECK(run("stabilizer --n 3 --k 2") == 1);
  std::string report = "/tmp/locckit_stab_report.json";
  CHECK(run("stabilizer --n 3 --k 2 --out " + report) == 1);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["witness"]["structure"] == nlohmann::json::parse("[[4,2]]"));
  CHECK(j["stabilizer"]["s0_dim"] == 16);
}

TEST_CASE("teleport-verify at d = 2 and 3", "[cli]") {
  std::string report = "/tmp/locckit_tp_report.json";
  CHECK(run("teleport-verify --d 2 --out " + report) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["residuals"]["max_deviation"].get<double>() <= 1e-10);
  CHECK(run("teleport-verify --d 3") == 0);
}

TEST_CASE("reports are byte-identical across runs", "[cli]") {
  std::string r1 = "/tmp/locckit_det1.json", r2 = "/tmp/locckit_det2.json";
  REQUIRE(run("analyze " + fixtures() + "/bell_pair.json --seed 9 --out " + r1) == 0);
  REQUIRE(run("analyze " + fixtures() + "/bell_pair.json --seed 9 --out " + r2) == 0);
  CHECK(slurp(r1) == slurp(r2));
}

TEST_CASE("verify accepts genuine witnesses and rejects tampered ones", "[cli]") {
  std::string report = "/tmp/locckit_verify_report.json";
  REQUIRE(run("analyze " + fixtures() + "/bell_pair.json --out " + report) == 0);
  CHECK(run("verify " + report + " " + fixtures() + "/bell_pair.json") == 0);

  // Tamper: swap the two Bob basis vectors of the first outcome.
  nlohmann::json j = nlohmann::json::parse(slurp(report));
  auto& bob = j["witness"]["protocol"]["bob_bases"][0];
  std::swap(bob[0], bob[1]);
  std::string tampered = "/tmp/locckit_tampered_report.json";
  std::ofstream(tampered) << j.dump(2);
  CHECK(run("verify " + tampered + " " + fixtures() + "/bell_pair.json") == 1);
}

TEST_CASE("verify re-validates structure certificates", "[cli]") {
  std::string report = "/tmp/locckit_structure_report.json";
  REQUIRE(run("analyze " + fixtures() + "/full_pauli.json --out " + report) == 1);
  CHECK(run("verify " + report + " " + fixtures() + "/full_pauli.json") == 0);

  nlohmann::json j = nlohmann::json::parse(slurp(report));
  j["witness"]["structure"] = nlohmann::json::parse("[[2,2]]");
  std::string tampered = "/tmp/locckit_structure_tampered.json";
  std::ofstream(tampered) << j.dump(2);
  CHECK(run("verify " + tampered + " " + fixtures() + "/full_pauli.json") == 1);
}

TEST_CASE("environment variable sets the default tolerance", "[cli]") {
  // A coarse absolute tolerance accepted from the environment flips the
  // boundary fixture, and a flag overrides the environment again.
  std::string cmd = "LOCCKIT_TOL_ABS=1e-4 " + bin() + " kl-check " + fixtures() +
                    "/boundary_kl.json > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);

  cmd = "LOCCKIT_TOL_ABS=1e-4 " + bin() + " kl-check " + fixtures() +
        "/boundary_kl.json --tol-abs 1e-10 > /dev/null 2>&1";
  status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 1);
}

TEST_CASE("text output mode emits a single line", "[cli]") {
  std::string out = "/tmp/locckit_text_report.txt";
  CHECK(run("analyze " + fixtures() + "/bell_pair.json --text --out " + out) == 0);
  std::string content = slurp(out);
  CHECK(content.find("analyze: distinguishable") == 0);
  CHECK(std::count(content.begin(), content.end(), '\n') == 1);
}

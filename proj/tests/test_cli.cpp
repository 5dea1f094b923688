#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>

namespace {

const std::string kCli = NERVE_CLI_PATH;
const std::string kData = NERVE_TEST_DATA;

std::string temp_path(const std::string& suffix) {
  static int counter = 0;
  return "/tmp/nerve_cli_test_" + std::to_string(getpid()) + "_" + std::to_string(counter++) + suffix;
}

struct RunResult {
  int exitCode;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string outFile = temp_path(".out");
  std::string cmd = kCli + " " + args + " > " + outFile + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(outFile);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::remove(outFile.c_str());
  return {WEXITSTATUS(rc), content};
}

}  // namespace

TEST_CASE("report on SU(3)/T^2") {
  auto res = run("report " + kData + "/su3_t2.json --seed 1");
  REQUIRE(res.exitCode == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["verdict"] == "EXISTS_BY_TOPOLOGY");
  CHECK(j["certificate"]["kind"] == "NonContractible");
  CHECK(j["certificate"]["degree"] == 0);
  CHECK(j["einstein"].size() == 4);
  CHECK(j["space"]["ell"] == 3);
  CHECK(j["torusAdjoined"] == false);
}

TEST_CASE("report is byte-identical across runs") {
  auto a = run("report " + kData + "/su3_t2.json --seed 7");
  auto b = run("report " + kData + "/su3_t2.json --seed 7");
  REQUIRE(a.exitCode == 0);
  CHECK(a.out == b.out);
  // different seed still deterministic but may reorder nothing structural
  auto c = run("report " + kData + "/su3_t2.json --seed 8");
  REQUIRE(c.exitCode == 0);
  auto jc = nlohmann::json::parse(c.out);
  CHECK(jc["einstein"].size() == 4);
}

TEST_CASE("aloff-wallach pipeline adjoins the torus") {
  auto res = run("report " + kData + "/su3_circle_11.json");
  REQUIRE(res.exitCode == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["torusAdjoined"] == true);
  CHECK(j["adjoinedDim"] == 1);
  CHECK(j["quotient"]["ell"] == 3);
  CHECK(j["certificate"]["kind"] == "NonContractible");
  CHECK(j["verdict"] == "EXISTS_BY_TOPOLOGY");
  CHECK(j["einstein"].size() >= 1);
  for (const auto& s : j["einstein"]) {
    CHECK(s["residual"].get<double>() < 1e-9);
    // degree-0 topology promises a critical point of augmented coindex >= 1
    CHECK(s["coindexAug"].get<int>() >= 1);
  }
}

TEST_CASE("describe, lattice, homology, einstein subsets") {
  auto d = run("describe " + kData + "/su3_t2.json");
  REQUIRE(d.exitCode == 0);
  auto jd = nlohmann::json::parse(d.out);
  CHECK(jd["verdict"] == "UNKNOWN");
  CHECK_FALSE(jd.contains("lattice"));

  auto l = run("lattice " + kData + "/su3_t2.json");
  auto jl = nlohmann::json::parse(l.out);
  CHECK(jl["lattice"]["nodes"].size() == 3);
  CHECK_FALSE(jl.contains("complex"));

  auto h = run("homology " + kData + "/su3_t2.json --format json");
  auto jh = nlohmann::json::parse(h.out);
  CHECK(jh["complex"]["betti"][0] == 2);
  CHECK(jh["einstein"].empty());

  auto e = run("einstein " + kData + "/su3_t2.json");
  auto je = nlohmann::json::parse(e.out);
  CHECK(je["einstein"].size() == 4);
  CHECK(je["verdict"] == "EXISTS_NUMERICALLY");
}

TEST_CASE("text format and artifact output") {
  auto t = run("report " + kData + "/su3_t2.json --format text");
  REQUIRE(t.exitCode == 0);
  CHECK(t.out.find("VERDICT: EXISTS_BY_TOPOLOGY") != std::string::npos);
  CHECK(t.out.find("lattice: 3 intermediate subalgebras") != std::string::npos);

  std::string artifact = temp_path(".json");
  auto r = run("report " + kData + "/su3_t2.json --out " + artifact);
  REQUIRE(r.exitCode == 0);
  std::ifstream in(artifact);
  REQUIRE(in.good());
  auto j = nlohmann::json::parse(in);
  CHECK(j["verdict"] == "EXISTS_BY_TOPOLOGY");
  std::remove(artifact.c_str());
  CHECK(r.out.find("VERDICT:") != std::string::npos);  // summary stream
}

TEST_CASE("curve command emits CSV") {
  std::string csv = temp_path(".csv");
  auto res = run("curve " + kData + "/su3_t2.json --node 0 --samples 5 --curve-t-max 2 --out " + csv);
  REQUIRE(res.exitCode == 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,sc,r_1,r_2,r_3");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
  std::remove(csv.c_str());
}

TEST_CASE("facet export") {
  std::string facets = temp_path(".txt");
  auto res = run("homology " + kData + "/su3_t2.json --facets " + facets);
  REQUIRE(res.exitCode == 0);
  std::ifstream in(facets);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all == "0\n1\n2\n");
  std::remove(facets.c_str());
}

TEST_CASE("thread cap does not change the artifact") {
  std::string outFile = temp_path(".out");
  std::string cmd = "NERVE_EINSTEIN_THREADS=1 " + kCli + " report " + kData +
                    "/su3_t2.json --seed 7 > " + outFile + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(outFile);
  std::string single((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::remove(outFile.c_str());
  auto parallel = run("report " + kData + "/su3_t2.json --seed 7");
  CHECK(single == parallel.out);
}

TEST_CASE("isotropy irreducible space report") {
  auto res = run("report " + kData + "/so4_so3.json");
  REQUIRE(res.exitCode == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["space"]["ell"] == 1);
  CHECK(j["einstein"].size() == 1);
  CHECK(j["lattice"]["nodes"].empty());
  CHECK(j["verdict"] == "EXISTS_BY_TOPOLOGY");  // empty complex
  CHECK(j["certificate"]["degree"] == -1);
}

TEST_CASE("flat torus quotient reports a Ricci-flat solution") {
  auto res = run("report " + kData + "/t2_trivial.json");
  REQUIRE(res.exitCode == 0);
  auto j = nlohmann::json::parse(res.out);
  CHECK(j["certificate"]["kind"] == "NotComputed");
  CHECK(j["verdict"] == "EXISTS_NUMERICALLY");
  REQUIRE(j["einstein"].size() == 1);
  CHECK(std::abs(j["einstein"][0]["lambda"].get<double>()) < 1e-12);
}

TEST_CASE("exit codes") {
  CHECK(run("report " + kData + "/malformed.json").exitCode == 2);
  CHECK(run("report " + kData + "/missing_file.json").exitCode == 2);
  CHECK(run("report " + kData + "/unsupported.json").exitCode == 3);
  CHECK(run("report " + kData + "/capped.json").exitCode == 4);
  CHECK(run("bogus-command " + kData + "/su3_t2.json").exitCode == 2);
}

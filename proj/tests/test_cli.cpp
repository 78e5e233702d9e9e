#include "doctest.h"

#include "cli_io.hpp"
#include "fpmod/finlab.hpp"
#include "fpmod/report.hpp"

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace fpmod;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string &args, const std::string &env = "") {
  std::string cmd = env + " " FPMOD_CLI_PATH " " + args + " 2>/dev/null";
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

json machine(const std::string &args) {
  auto r = run(args + " --machine");
  REQUIRE(r.status == 0);
  return json::parse(r.out);
}

/// Every object carrying a "module" string came from a named operation.
void require_provenance(const json &j) {
  if (j.is_object() && j.contains("module") && j["module"].is_string()) CHECK(j.contains("op"));
  if (j.is_structured())
    for (const auto &v : j) require_provenance(v);
}

} // namespace

TEST_CASE("ring tags") {
  CHECK(cli::engine_tag(cli::parse_engine("int")) == "int");
  CHECK(cli::engine_tag(cli::parse_engine("mod(12)")) == "mod(12)");
  CHECK(cli::engine_tag(cli::parse_engine("poly(7)")) == "poly(7)");
  CHECK_THROWS_AS(cli::parse_engine("poly(6)"), cli::ParseError);
  CHECK_THROWS_AS(cli::parse_engine("mod(1)"), cli::ParseError);
  CHECK_THROWS_AS(cli::parse_engine("Z"), cli::ParseError);
}

TEST_CASE("text format") {
  auto doc = cli::parse_text("# comment\nring mod(6)\nmodule A\ngenerators 2\nrelations 1\nrow 2 # trailing\nrow 3\nend\n"
                             "module\ngenerators 3\nrelations 0\nend\n");
  CHECK(doc.ring == "mod(6)");
  REQUIRE(doc.modules.size() == 2);
  CHECK(doc.modules[0].generators == 2);
  CHECK(doc.modules[0].rows == json::parse("[[2],[3]]"));
  CHECK(doc.modules[1].generators == 3);
  auto P = cli::to_presentation(ModEngine(6), doc.modules[1]);
  CHECK(P.relations.rows() == 3);
  CHECK(P.relations.cols() == 0);

  auto poly = cli::parse_text("ring poly(3)\nmodule\ngenerators 1\nrelations 2\nrow [1, 0, 1] []\nend\n");
  auto Q = cli::to_presentation(PolyEngine(3), poly.modules[0]);
  CHECK(Q.relations(0, 0) == PolyEngine(3).from_coeffs({1, 0, 1}));
  CHECK(Q.relations(0, 1) == PolyEngine(3).zero());

  for (const char *bad : {"module\ngenerators 1\nrelations 0\nend\n", "ring int\n",
                          "ring int\nmodule\ngenerators 1\nrelations 1\nrow 1\n",
                          "ring int\nmodule\ngenerators 2\nrelations 1\nrow 1\nend\n",
                          "ring int\nmodule\nrelations 1\nend\n", "ring int\nmodule\ngenerators 1\nrelations 1\nrow x\nend\n",
                          "ring int\nmodule\ngenerators 1\nrelations 1\nrow [1\nend\n", "ring int\nfoo\n"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(cli::parse_text(bad), cli::ParseError);
  }
}

TEST_CASE("JSON format round-trips reports") {
  IntegerEngine Z;
  MatrixOf<IntegerEngine> F(2, 2);
  F(0, 0) = 6;
  F(1, 0) = mpz_class("123456789012345678901234567890");
  Presentation<IntegerEngine> P(Z, 2, F);
  auto doc = cli::parse_document(report::presentation_json(P).dump());
  CHECK(doc.ring == "int");
  CHECK(cli::to_presentation(Z, doc.modules[0]) == P);

  auto two = cli::parse_json(json::parse(R"j({"ring":"mod(4)","modules":[{"relations":[[2]]},{"generators":2,"relations":[]}]})j"));
  CHECK(two.modules.size() == 2);
  CHECK(two.modules[1].generators == 2);
  CHECK_THROWS_AS(cli::parse_json(json::parse(R"j({"ring":"int","relations":[[1],[2,3]]})j")), cli::ParseError);
  CHECK_THROWS_AS(cli::parse_document("{\"ring\":"), cli::ParseError);
  CHECK_THROWS_AS(cli::to_presentation(Z, cli::raw_from_matrix("[[[1,2]]]", std::nullopt)), cli::ParseError);
}

TEST_CASE("caps grammar") {
  auto c = finlab::Caps::parse("ring=10,lattice=5");
  CHECK(c.ring == 10);
  CHECK(c.lattice == 5);
  CHECK(c.module == finlab::Caps{}.module);
  CHECK_THROWS_AS(finlab::Caps::parse("ring=ten"), DomainError);
  CHECK_THROWS_AS(finlab::Caps::parse("size=3"), DomainError);
  CHECK_THROWS_AS(finlab::Caps::parse("module=300"), DomainError);
}

TEST_CASE("decompose example") {
  auto rep = machine("decompose --ring int --relations \"[[2,0],[0,0]]\"");
  CHECK(rep["result"]["proj"]["module"] == "Z");
  CHECK(rep["result"]["stab"]["module"] == "Z/(2)");
  CHECK(rep["input"]["M"]["relations"] == json::parse("[[2,0],[0,0]]"));
  CHECK(rep["normalization"]["M"].contains("procedure"));
  require_provenance(rep);
}

TEST_CASE("jacobson example") {
  auto rep = machine("oracle jacobson --ring \"idealization(z2^3)\"");
  auto A = finlab::idealization(finlab::parse_ring("z2^3"));
  CHECK(rep["result"]["jacobson radical"] == report::ring_subset_json(*A.ring, A.zero_times_S));
  CHECK(rep["result"]["is two-sided ideal"] == true);
}

TEST_CASE("suite example") {
  auto r = run("suite corollary38 --seed 7 --count 300");
  CHECK(r.status == 0);
  CHECK(r.out.find("PASS, 600/600") != std::string::npos);
  auto rep = machine("suite remark37");
  CHECK(rep["passed"] == true);
  require_provenance(rep);
}

TEST_CASE("every module operation reports input, normalization and provenance") {
  const std::string M = "--ring int --relations \"[[2,0,1],[0,3,1]]\"", N = "--other-relations \"[[4]]\"";
  for (const char *op : {"invariants", "dual", "transpose", "decompose", "peel", "stable", "projective", "torsionless",
                         "udim", "hdim"}) {
    CAPTURE(op);
    auto rep = machine(std::string(op) + " " + M);
    CHECK(rep["op"] == op);
    CHECK(rep.contains("input"));
    CHECK(rep.contains("normalization"));
    require_provenance(rep);
  }
  for (const char *op : {"ext1", "tor1", "hom", "tensor", "equiv", "verify-mu-epsilon"}) {
    CAPTURE(op);
    auto rep = machine(std::string(op) + " " + M + " " + N);
    CHECK(rep["input"].contains("N"));
    require_provenance(rep);
  }
  auto r37 = machine("remark37 --ring int");
  CHECK(r37["result"]["pd(Tr U) <= 1"] == true);
  CHECK(r37["result"]["U* nonzero"] == true);
}

TEST_CASE("identical jobs give identical bytes") {
  for (const char *args : {"decompose --ring \"poly(5)\" --relations \"[[[1,1],[0]],[[0],[2,0,1]]]\" --machine",
                           "suite theorem32 --seed 11 --count 20 --machine", "oracle lattice --ring z12 --machine"}) {
    CAPTURE(args);
    auto a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("input files") {
  auto rep = machine("ext1 --input " FPMOD_DATA_DIR "/z_plus_torsion.fpm");
  CHECK(rep["result"]["value"]["module"] == "Z/(2)");
  auto poly = machine("invariants --input " FPMOD_DATA_DIR "/poly5.fpm");
  CHECK(poly["result"]["invariants"]["free_rank"] == 1);
}

TEST_CASE("exit codes") {
  auto domain = run("remark37 --ring \"mod(4)\" --machine");
  CHECK(domain.status == 1);
  CHECK(json::parse(domain.out)["error"]["kind"] == "domain");

  auto mismatch = run("invariants --ring \"mod(4)\" --input " FPMOD_DATA_DIR "/poly5.fpm --machine");
  CHECK(mismatch.status == 1);
  CHECK(json::parse(mismatch.out)["error"]["message"].get<std::string>().find("engine mismatch") != std::string::npos);

  auto cap = run("oracle projective --ring z4 --relations \"[[2]]\" --machine", "FPMOD_CAPS=endomorphisms=0");
  CHECK(cap.status == 1);
  CHECK(json::parse(cap.out)["error"]["kind"] == "cap");

  for (const char *args : {"frobnicate", "invariants --ring int --relations \"[[1,2]\"", "invariants --ring Z --relations \"[[1]]\"",
                           "ext1 --ring int --relations \"[[1]]\"", "suite nosuch", "oracle nosuch --ring z4", "oracle jacobson --ring \"z((\"",
                           "invariants --ring \"poly(5)\" --relations \"[[[1,x]]]\""}) {
    CAPTURE(args);
    auto r = run(std::string(args) + " --machine");
    CHECK(r.status == 2);
    CHECK(json::parse(r.out).contains("error"));
  }
  CHECK(run("--help").status == 0);
}

#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args, const std::string& input = "") {
  std::vector<std::string> full = {"--fixtures", RPV_FIXTURES};
  full.insert(full.end(), args.begin(), args.end());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = rpv::cli::run(full, in, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Outcome& o) { return nlohmann::json::parse(o.out); }

}  // namespace

TEST_CASE("classify the rotation system") {
  Outcome o = run({"--json", "classify", "system8.pdsys"});
  CHECK(o.code == 1);
  auto j = json_of(o);
  CHECK(j["verdict"] == "NotGeneralisedLiouvillian");
  CHECK(j["details"]["group"]["descriptor"].get<std::string>().find("SO2") != std::string::npos);
  CHECK(j["exit_code"] == 1);
}

TEST_CASE("check") {
  Outcome ok = run({"check", "system7.pdsys"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("check: integrable", 0) == 0);
  Outcome bad = run({"--json", "check", "system7_corrupt.pdsys"});
  CHECK(bad.code == 1);
  CHECK(json_of(bad)["details"]["residual"][0][0] == "1");
}

TEST_CASE("euler") {
  Outcome o = run({"--json", "euler", "1"});
  CHECK(o.code == 0);
  auto j = json_of(o);
  CHECK(j["verdict"] == "Gm");
  CHECK(j["details"]["roots"][0] == "1/2 + 1/2*sqrt(5)");
  CHECK(j["details"]["roots"][1] == "1/2 - 1/2*sqrt(5)");
  CHECK(run({"euler", "abc"}).code == 2);
}

TEST_CASE("verify and solve") {
  CHECK(run({"verify", "system8.pdsys", "system8.tower", "system8.mat"}).code == 0);
  CHECK(run({"verify", "system9.pdsys", "system9.tower", "system9_corrupt.mat"}).code == 1);
  Outcome s = run({"--json", "solve-triangular", "triangular.pdsys"});
  CHECK(s.code == 0);
  CHECK(json_of(s)["details"]["matrix"][0][1] == "t1*t2");
  CHECK(run({"solve-triangular", "system8.pdsys"}).code == 1);
}

TEST_CASE("certify, reduce, order and gradient") {
  CHECK(run({"certify-tower", "system7.tower"}).code == 0);
  CHECK(run({"certify-tower", "system8.tower"}).code == 1);
  Outcome r = run({"--json", "reduce", "system7.pdsys"});
  CHECK(r.code == 0);
  CHECK(json_of(r)["details"]["a_d"][0][0] == "t1*u2 + t2*u1");
  Outcome oc = run({"--json", "order-cmp", "t2", "t1"});
  CHECK(json_of(oc)["details"]["sign"] == -1);
  Outcome ov = run({"--json", "--vars", "t2,t1", "order-cmp", "t2", "t1"});
  CHECK(json_of(ov)["details"]["sign"] == 1);
  Outcome g = run({"--json", "gradient", "2", "3"});
  CHECK(g.code == 0);
  auto j = json_of(g);
  CHECK(j["details"]["first_integral"] == "x^3/y^2");
  CHECK(j["details"]["level_curve"] == "y^2 = x^3");
  CHECK(j["details"]["curvature_approx"].size() == 4);
  CHECK(run({"gradient", "0", "3"}).code == 2);
}

TEST_CASE("standard input and errors") {
  Outcome o = run({"check", "-"}, "vars: t\nrank: 1\nmatrix t:\n[1/t]\n");
  CHECK(o.code == 0);
  Outcome p = run({"parse", "bad_unbalanced.pdsys"});
  CHECK(p.code == 2);
  CHECK(p.err.find("4:5") != std::string::npos);
  CHECK(run({"check", "does_not_exist.pdsys"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"classify"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reports are deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--json", "classify", "system9.pdsys"}, {"--json", "gradient", "2", "3"}, {"classify", "system7.pdsys"}}) {
    CHECK(run(args).out == run(args).out);
  }
}

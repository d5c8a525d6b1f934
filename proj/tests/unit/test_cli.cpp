#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <cstdlib>
#include <fstream>
#include <functional>

#include "mahler/cli.hpp"
#include "mahler/extremal.hpp"
#include "support.hpp"

using namespace mahler;
using cli::run;
using nlohmann::json;

namespace {

Real mid_of(const json& ball) { return Real(ball.at("mid").get<std::string>()); }

bool close(const json& ball, const char* expected, double tol) {
  return boost::multiprecision::abs(mid_of(ball) - Real(expected)) <= tol;
}

// Writes a modified copy of a shipped fixture and returns its path.
std::string temp_fixture(const std::string& name, const std::function<void(json&)>& edit) {
  std::ifstream in(testing_support::fixture_path(name));
  json j = json::parse(in);
  edit(j);
  const auto path = std::filesystem::temp_directory_path() / ("mahler_cli_" + name + "_" + std::to_string(std::rand()) + ".json");
  std::ofstream(path) << j.dump(2);
  return path.string();
}

}  // namespace

TEST_CASE("examples") {
  auto h = run({"height", "--fixture", "qsqrt5", "--element", "golden", "--p", "1", "--json"});
  REQUIRE(h.exit_code == 0);
  CHECK(h.json);
  CHECK(close(h.outputs["height"], "0.481211825059603447497758913424", 1e-25));
  CHECK(std::stod(h.outputs["height"]["rad"].get<std::string>()) < 1e-30);

  auto m = run({"extremal-m1", "--fixture", "qsqrt5", "--element", "golden"});
  REQUIRE(m.exit_code == 0);
  CHECK(close(m.outputs["total"], "0.962423650119206894995517826849", 1e-25));
  REQUIRE(m.outputs["parts"].size() == 1);
  CHECK(m.outputs["parts"][0]["subfield"] == "Q(sqrt5)");
  CHECK(m.outputs["certificates_hold"] == true);

  auto d = run({"delta", "--fixture", "qsqrt2", "--element", "sqrt2"});
  REQUIRE(d.exit_code == 0);
  CHECK(d.outputs["delta"] == 1);
  CHECK(d.status == "ok");
}

TEST_CASE("every subcommand runs") {
  for (const char* cmd : {"height", "delta", "qnorm", "eta", "project-field", "project-sunits", "extremal-m1", "oracle-check"}) {
    CAPTURE(cmd);
    auto r = run({cmd, "--fixture", "qbiquad", "--element", "sqrt2+sqrt3"});
    CHECK(r.exit_code == 0);
    CHECK(r.status == "ok");
    CHECK(r.inputs_digest.size() == 16);
    CHECK_FALSE(cli::render_text(r).empty());
  }
  auto v = run({"validate", "--fixture", testing_support::fixture_path("qsqrt2-ext")});
  REQUIRE(v.exit_code == 0);
  CHECK(v.outputs["s_unit_rank"] == v.outputs["expected_rank"]);

  auto q = run({"qnorm", "--fixture", "qbiquad", "--element", "1,-2,1/3,1/2,3", "--subfield", "Q(sqrt3)"});
  REQUIRE(q.exit_code == 0);
  CHECK(close(q.outputs["qnorm"], "0.8813735870195430252326093", 1e-20));

  auto ps = run({"project-sunits", "--fixture", "qsqrt2-ext", "--element", "7(1+sqrt2)", "--sprimes", "2"});
  REQUIRE(ps.exit_code == 0);
  CHECK(ps.outputs["basis_coords"] == json::array({"1", "0", "0", "0"}));
  CHECK(ps.outputs["n_v"]["3"] == "1");

  auto oc = run({"oracle-check", "--fixture", "qbiquad", "--element", "1,-2,1/3,1/2,3"});
  CHECK(oc.exit_code == 0);
  CHECK(oc.outputs["agree"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run({}).exit_code == cli::kUsage);
  CHECK(run({"bogus"}).exit_code == cli::kUsage);
  CHECK(run({"height", "--element", "golden"}).exit_code == cli::kUsage);
  CHECK(run({"height", "--fixture", "qsqrt5", "--element", "golden", "--p", "3"}).exit_code == cli::kUsage);
  CHECK(run({"height", "--fixture", "qsqrt5", "--element", "golden", "--precision", "8"}).exit_code == cli::kUsage);
  CHECK(run({"height", "--fixture", "qsqrt5"}).exit_code == cli::kUsage);

  auto unknown = run({"height", "--fixture", "qsqrt5", "--element", "pi"});
  CHECK(unknown.exit_code == cli::kValidation);
  CHECK(unknown.status == "validation");
  CHECK(unknown.outputs.empty());
  CHECK(run({"height", "--fixture", "no-such-fixture", "--element", "one"}).exit_code == cli::kValidation);
  CHECK(run({"qnorm", "--fixture", "qsqrt5", "--element", "golden", "--subfield", "Q(sqrt7)"}).exit_code == cli::kValidation);

  const auto broken = temp_fixture("qsqrt2", [](json& j) { j["degree"] = 3; });
  CHECK(run({"validate", "--fixture", broken}).exit_code == cli::kValidation);
  std::filesystem::remove(broken);

  const auto coarse = temp_fixture("qsqrt2", [](json& j) {
    j["s_unit_basis"][0]["arch"]["0"] = "0.8813735870";
    j["s_unit_basis"][0]["arch"]["1"] = "-0.8813735870";
  });
  const auto r = run({"validate", "--fixture", coarse});
  CHECK(r.exit_code == cli::kPrecision);
  CHECK(r.status == "precision");
  std::filesystem::remove(coarse);
}

TEST_CASE("determinism and round trip") {
  const std::vector<std::string> args = {"extremal-m1", "--fixture", "qbiquad", "--element", "(1+sqrt2)(2+sqrt3)", "--json"};
  const auto a = cli::render_json(run(args));
  const auto b = cli::render_json(run(args));
  CHECK(a == b);

  const json j = json::parse(a);
  CHECK(j["command"] == "extremal-m1");
  CHECK(j["status"] == "ok");
  CHECK(j["args"].size() == args.size());
  const auto& fix = testing_support::fixture("qbiquad");
  const auto direct = extremal_m1(fix, fix.element("(1+sqrt2)(2+sqrt3)"));
  CHECK(boost::multiprecision::abs(mid_of(j["outputs"]["total"]) - direct.total.mid()) < Real("1e-29"));
  CHECK(close(j["outputs"]["total"], "4.3966629678887195", 1e-9));
  CHECK(json::parse(j.dump()) == j);

  // digest depends on the arguments
  auto other = run({"extremal-m1", "--fixture", "qbiquad", "--element", "sqrt2"});
  CHECK(other.inputs_digest != run(args).inputs_digest);
}

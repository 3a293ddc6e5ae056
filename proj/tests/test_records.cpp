#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "hesssym/records.hpp"
#include "json.hpp"

using namespace hesssym;

TEST_CASE("doubles round-trip through the text format") {
  const double values[] = {0.0,
                           1.0,
                           -1.0,
                           1.0 / 3.0,
                           3.141592653589793,
                           0.25 - 0.15915494309189535,
                           1e300,
                           -1e-300,
                           5.6855538271469905,
                           std::numeric_limits<double>::denorm_min(),
                           std::numeric_limits<double>::max()};
  for (double v : values) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("spectrum rows serialize to the documented CSV schema") {
  std::vector<SpectrumRow> rows(2);
  rows[0] = {"typeII", 8, 8, "reduced", "x_p", 0.0625, 21, 0.03125, 1e-13};
  rows[1] = {"typeII", 8, 8, "full", "-", 0.0625, 1, 0.03125, 1e-13};
  const std::string csv = to_csv(rows);

  const std::string expected =
      "family,k,d,source,component,eigenvalue,multiplicity,loss,grad_norm\n"
      "typeII,8,8,reduced,x_p,0.0625,21,0.03125,1e-13\n"
      "typeII,8,8,full,-,0.0625,1,0.03125,1e-13\n";
  CHECK(csv == expected);

  // Byte-identical on repeat.
  CHECK(to_csv(rows) == csv);
}

TEST_CASE("cells containing delimiters are quoted") {
  std::vector<SweepRow> rows(1);
  rows[0].family = "typeI";
  rows[0].k = 6;
  rows[0].ok = false;
  rows[0].error = "NoConvergence: stalled, residual 1e-3 at \"iteration\" 40";
  const std::string csv = to_csv(rows);
  CHECK(csv.find("\"NoConvergence: stalled, residual 1e-3 at \"\"iteration\"\" 40\"") !=
        std::string::npos);
  // Header + exactly one row.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("JSON output parses back with identical values") {
  std::vector<SpectrumRow> rows(1);
  rows[0] = {"global", 6, 6, "reduced", "t", 0.8896627389, 1, 0.0, 0.0};
  const auto parsed = nlohmann::json::parse(to_json(rows));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0]["family"] == "global");
  CHECK(parsed[0]["k"] == 6);
  CHECK(parsed[0]["eigenvalue"].get<double>() == 0.8896627389);
  CHECK(parsed[0]["multiplicity"] == 1);
  CHECK(to_json(rows) == to_json(rows));

  std::vector<PerturbRow> prow(1);
  prow[0] = {"typeII", 20, 20, 1e-3, 42u, 0, true, "", 3, 0.0761, 153, 2.5e-4};
  const auto pj = nlohmann::json::parse(to_json(prow));
  CHECK(pj[0]["sigma"].get<double>() == 1e-3);
  CHECK(pj[0]["seed"] == 42);
  CHECK(pj[0]["count"] == 153);

  std::vector<VerifyCheck> checks(1);
  checks[0] = {"reduced_vs_full", 3.2e-11, 1e-8, true};
  const auto vj = nlohmann::json::parse(to_json(checks));
  CHECK(vj[0]["check"] == "reduced_vs_full");
  CHECK(vj[0]["pass"] == true);
  CHECK(vj[0]["measured"].get<double>() == 3.2e-11);
}

TEST_CASE("sweep rows keep failures alongside successes") {
  std::vector<SweepRow> rows(2);
  rows[0].family = "typeII";
  rows[0].k = 8;
  rows[0].ok = true;
  rows[0].lambda_x = 0.05;
  rows[1].family = "typeII";
  rows[1].k = 5;
  rows[1].ok = false;
  rows[1].error = "UnsupportedK: needs k >= 6";

  const auto j = nlohmann::json::parse(to_json(rows));
  CHECK(j.size() == 2);
  CHECK(j[0]["ok"] == true);
  CHECK(j[1]["ok"] == false);
  CHECK(j[1]["error"] == "UnsupportedK: needs k >= 6");

  const std::string csv = to_csv(rows);
  CHECK(csv.find("true") != std::string::npos);
  CHECK(csv.find("false") != std::string::npos);
  CHECK(csv.rfind("family,k,ok,error,lambda_x,lambda_y,lambda_max,outliers,"
                  "scaled_x,scaled_y,loss,grad_norm\n",
                  0) == 0);
}

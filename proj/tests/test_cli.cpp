#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hypercount/cli.hpp"
#include "hypercount/errors.hpp"
#include "hypercount/serialize.hpp"
#include "oracles.hpp"

using namespace hypercount;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("hypercount_test_" + name);
}

}  // namespace

TEST_CASE("json round trips") {
  Form f = parse_form("x0^3 + x1^3 + x2^3 + x3^3");
  CountOptions opts;
  opts.want_points = true;
  CountReport r = count_points(f, 6, opts);
  CHECK(count_report_from_json(Json::parse(to_json(r).dump())) == r);
  r.points.reset();
  CHECK(count_report_from_json(Json::parse(to_json(r).dump())) == r);

  auto lines = rational_lines(f, 2);
  REQUIRE(!lines.empty());
  for (const auto& s : lines) CHECK(subspace_from_json(Json::parse(to_json(s).dump())) == s);

  auto att = attribute_points(f, 5, 2);
  CHECK(attribution_from_json(Json::parse(to_json(att).dump())) == att);

  auto fit = fit_exponent({{10, 7}, {20, 31}, {40, 117}, {80, 500}});
  CHECK(fit_from_json(Json::parse(to_json(fit).dump())) == fit);
}

TEST_CASE("json big integers and validation") {
  mpz_class big("123456789012345678901234567890");
  CHECK(mpz_to_json(big).is_string());
  CHECK(mpz_from_json(mpz_to_json(big)) == big);
  CHECK(mpz_from_json(mpz_to_json(mpz_class(-5))) == -5);
  CHECK_THROWS_AS(mpz_from_json(Json(1.5)), InvalidArgument);

  Json s = to_json(rational_lines(parse_form("x0*x3 - x1*x2"), 1).front());
  s["pluecker"][0] = 99;
  CHECK_THROWS_AS(subspace_from_json(s), InvalidArgument);
  CHECK_THROWS_AS(count_report_from_json(Json::object()), InvalidArgument);
}

TEST_CASE("csv series") {
  CountReport a, b;
  a.bound = 10;
  a.total = 100;
  b.bound = 20;
  b.total = 400;
  auto text = series_to_csv({a, b});
  CHECK(text == "B,total\n10,100\n20,400\n");
  auto back = series_from_csv(text);
  CHECK(back == std::vector<std::pair<std::int64_t, std::uint64_t>>{{10, 100}, {20, 400}});
  CHECK_THROWS_AS(series_from_csv("b,n\n1,2\n"), InvalidArgument);
  CHECK_THROWS_AS(series_from_csv("B,total\n1,x\n"), InvalidArgument);
  CHECK_THROWS_AS(series_from_csv("B,total\n1,-2\n"), InvalidArgument);
}

TEST_CASE("cli count agrees with brute force") {
  auto res = call({"count", "--form", "x0*x1-x2*x3", "--B", "10", "--method", "sieved"});
  REQUIRE(res.code == 0);
  auto j = Json::parse(res.out);
  auto expected = oracle::zeros(parse_form("x0*x1-x2*x3"), 10).size();
  CHECK(j["total"].get<std::uint64_t>() == expected);
  CHECK(j["method"] == "sieved");

  res = call({"count", "--form", "x0*x1-x2*x3", "--B", "100", "--method", "sieved"});
  REQUIRE(res.code == 0);
  CHECK(Json::parse(res.out)["total"].get<std::uint64_t>() > 0);
}

TEST_CASE("cli threads and seed do not change totals") {
  std::uint64_t first = 0;
  for (const char* t : {"1", "4", "8"}) {
    for (const char* seed : {"1", "99"}) {
      auto res = call({"count", "--form", "x0^2 + x1^2 - x2^2 - x3^2", "--B", "25", "--threads", t,
                       "--seed", seed});
      REQUIRE(res.code == 0);
      auto total = Json::parse(res.out)["total"].get<std::uint64_t>();
      if (first == 0) first = total;
      CHECK(total == first);
    }
  }
  setenv("HYPERCOUNT_THREADS", "3", 1);
  auto res = call({"count", "--form", "x0^2 + x1^2 - x2^2 - x3^2", "--B", "25"});
  CHECK(Json::parse(res.out)["total"].get<std::uint64_t>() == first);
  setenv("HYPERCOUNT_THREADS", "0", 1);
  CHECK(call({"count", "--form", "x0^2 + x1^2 - x2^2 - x3^2", "--B", "25"}).code == 2);
  unsetenv("HYPERCOUNT_THREADS");
}

TEST_CASE("cli sweep feeds fit") {
  auto csv = temp_file("sweep.csv");
  auto res = call({"count", "--form", "x0*x1-x2*x3", "--sweep", "4:2:4", "--format", "csv",
                   "--output", csv.string()});
  REQUIRE(res.code == 0);
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "B,total");
  std::vector<std::int64_t> bs;
  while (std::getline(in, line)) bs.push_back(std::stoll(line.substr(0, line.find(','))));
  CHECK(bs == std::vector<std::int64_t>{4, 8, 16, 32});

  auto fitres = call({"fit", "--input", csv.string()});
  REQUIRE(fitres.code == 0);
  CHECK(Json::parse(fitres.out).contains("slope"));

  // exact B^2 data
  {
    std::ofstream syn(csv);
    syn << "B,total\n";
    for (int b : {10, 20, 40, 80, 160}) syn << b << "," << b * b << "\n";
  }
  fitres = call({"fit", "--input", csv.string()});
  REQUIRE(fitres.code == 0);
  CHECK(Json::parse(fitres.out)["slope"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
  std::filesystem::remove(csv);
}

TEST_CASE("cli formulas") {
  auto res = call({"formulas", "--intersection-degree", "--d", "3", "--r", "0..3"});
  REQUIRE(res.code == 0);
  auto rows = Json::parse(res.out)["intersection_degree"];
  CHECK(rows == Json::parse("[[3,0,1],[3,1,-1],[3,2,3],[3,3,-5]]"));
  res = call({"formulas", "--line-bounds", "--d", "3..5"});
  CHECK(Json::parse(res.out)["line_count_bounds"] ==
        Json::parse("[[3,27,27],[4,80,76],[5,155,147]]"));
  res = call({"formulas", "--fermat-planes", "--m", "1,2", "--d", "3"});
  CHECK(Json::parse(res.out)["fermat_plane_count"] == Json::parse("[[1,3,27],[2,3,405]]"));
  res = call({"formulas", "--format", "text"});
  CHECK(res.code == 0);
  CHECK(res.out.find("line_count_bounds") != std::string::npos);
}

TEST_CASE("cli lines cone attribute singular") {
  const std::string fermat = "x0^3+x1^3+x2^3+x3^3";
  auto res = call({"lines", "--form", fermat, "--height-bound", "4"});
  REQUIRE(res.code == 0);
  CHECK(Json::parse(res.out).size() == 3);

  res = call({"lines", "--form", fermat, "--height-bound", "4", "--point", "1,-1,0,0"});
  REQUIRE(res.code == 0);
  auto through = Json::parse(res.out);
  REQUIRE(through.size() == 1);
  CHECK(subspace_from_json(through[0]).contains(normalize(Coords{1, -1, 0, 0})));

  res = call({"cone", "--form", fermat, "--point", "1,-1,0,0"});
  REQUIRE(res.code == 0);
  CHECK(Json::parse(res.out)["degenerate"] == Json::parse("[true,false]"));

  res = call({"attribute", "--form", fermat, "--B", "5", "--height-bound", "2"});
  REQUIRE(res.code == 0);
  auto att = attribution_from_json(Json::parse(res.out));
  CHECK(att == attribute_points(parse_form(fermat), 5, 2));

  res = call({"singular-search", "--form", "x0^2*x2 - x1^3", "--height-bound", "3"});
  REQUIRE(res.code == 0);
  CHECK(Json::parse(res.out)["points"] == Json::parse("[[0,0,1]]"));
}

TEST_CASE("cli exit codes") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"count", "--form", "x0*x1-x2^2"}).code == 2);
  CHECK(call({"count", "--form", "x0*x1-x2^2", "--B", "5,3"}).code == 2);
  CHECK(call({"count", "--form", "x0*x1-x2^2", "--B", "5", "--method", "fast"}).code == 2);
  CHECK(call({"count", "--form", "x0*x1-x2^2", "--B", "5", "--format", "csv"}).code == 0);
  CHECK(call({"lines", "--form", "x0*x1-x2^2", "--format", "csv", "--height-bound", "1"}).code == 2);

  auto res = call({"count", "--form", "x0^2 + x1", "--B", "3"});
  CHECK(res.code == 1);
  auto err = Json::parse(res.err);
  CHECK(err["error"] == "mixed_degrees");

  res = call({"count", "--form", "x0*x1 - x1*x2 + x2*x3", "--B", "3", "--method", "mitm"});
  CHECK(res.code == 1);
  CHECK(Json::parse(res.err)["error"] == "method_inapplicable");

  res = call({"count", "--form", "x0^3+x1^3+x2^3+x3^3", "--B", "10", "--method", "mitm",
              "--memory-cap", "10"});
  CHECK(res.code == 1);
  CHECK(Json::parse(res.err)["error"] == "memory_budget_exceeded");

  res = call({"count", "--form-file", "/nonexistent/form.txt", "--B", "3"});
  CHECK(res.code == 1);
  CHECK(Json::parse(res.err)["error"] == "io_error");

  res = call({"cone", "--form", "x0^3+x1^3+x2^3+x3^3", "--point", "1,0,0,0"});
  CHECK(res.code == 1);
  CHECK(Json::parse(res.err)["error"] == "not_on_hypersurface");
}

TEST_CASE("cli form file and points") {
  auto path = temp_file("form.txt");
  {
    std::ofstream f(path);
    f << "# a quadric\nx0*x1\n - x2*x3\n";
  }
  auto res = call({"points", "--form-file", path.string(), "--B", "1", "--format", "json"});
  REQUIRE(res.code == 0);
  auto j = Json::parse(res.out);
  auto expected = oracle::zeros(parse_form("x0*x1-x2*x3"), 1);
  REQUIRE(j["points"].size() == expected.size());
  CHECK(j["total"].get<std::uint64_t>() == expected.size());
  std::filesystem::remove(path);

  res = call({"points", "--form", "x0^2 - x1^2", "--B", "1", "--format", "csv"});
  CHECK(res.out == "B,x0,x1\n1,1,-1\n1,1,1\n");
}

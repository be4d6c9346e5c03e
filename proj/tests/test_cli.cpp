#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bsl/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bsl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bsl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bsl-cli-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("catalog") {
  const auto text = run({"catalog"});
  CHECK(text.code == 0);
  CHECK(text.out.find("spectra-unsupported") != std::string::npos);
  const auto j = nlohmann::json::parse(run({"catalog", "--format", "json"}).out);
  CHECK(j.at("schema") == 1);
  REQUIRE(j["result"]["entries"].size() == 3);
  CHECK(j["result"]["entries"][2]["id"] == "gm");
  CHECK(j["result"]["entries"][2]["spectra_supported"] == false);
}

TEST_CASE("spectrum output") {
  const auto r = run({"spectrum", "--diagram", "hopf", "--side", "Mprime", "--grid", "512", "--modes", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("tool") == "bsl");
  CHECK(j.at("version") == bsl::cli::kVersion);
  CHECK(j.at("config").at("seed") == 7);
  CHECK(j.contains("tolerances"));
  const auto& s = j["result"]["extrapolated"]["spectrum"];
  const std::vector<double> zonal{8, 24, 48, 80};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s[i]["lambda"].get<double>() - zonal[i]) <= 1e-6 * zonal[i]);
  CHECK(s[0].contains("err"));

  const auto csv = run({"spectrum", "--diagram", "trivial-s2", "--grid", "64", "--modes", "2", "--format", "csv"});
  CHECK(csv.out.rfind("index,lambda,mult,err\n1,", 0) == 0);
}

TEST_CASE("exit codes") {
  const auto gm = run({"spectrum", "--diagram", "gm"});
  CHECK(gm.code == 2);
  CHECK(gm.err.find("cohomogeneity") != std::string::npos);
  CHECK(run({"spectrum", "--diagram", "hopf", "--grid", "96"}).code == 1);
  CHECK(run({"spectrum", "--diagram", "hopf", "--modes", "65"}).code == 1);
  CHECK(run({"spectrum", "--diagram", "nope"}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"compare", "--diagram", "hopf", "--grid", "128", "--expect", "isospectral"}).code == 0);
  CHECK(run({"compare", "--diagram", "hopf", "--grid", "128", "--expect", "distinct"}).code == 4);
  CHECK(run({"compare", "--diagram", "hopf", "--fiber-scale", "2", "--grid", "128", "--expect", "isospectral"}).code == 4);
  CHECK(run({"compare", "--diagram", "hopf", "--fiber-scale", "2", "--grid", "128", "--expect", "distinct"}).code == 0);
  CHECK(run({"warp", "--diagram", "hopf", "--scales", "0.5,x"}).code == 1);
}

TEST_CASE("compare CSV columns") {
  const auto r = run({"compare", "--diagram", "hopf", "--grid", "128", "--modes", "3", "--format", "csv"});
  CHECK(r.out.rfind("index,lambda_M,lambda_Mprime,relgap\n", 0) == 0);
}

TEST_CASE("warp report") {
  const auto r = run({"warp", "--diagram", "hopf", "--grid", "256", "--scales", "0.5,1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["any_broke"] == true);
  CHECK(j["result"]["control"]["scale"] == 0.0);
  CHECK(j["result"]["control"]["broke_isospectrality"] == false);
  CHECK(j["result"]["reports"].size() == 2);
  CHECK(j["result"]["reports"][0].contains("audit"));
}

TEST_CASE("verify gm") {
  const auto r = run({"verify", "--diagram", "gm", "--samples", "200", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["commute_residual"].get<double>() <= 1e-12);
  CHECK(j["result"]["passed"] == true);
  CHECK_FALSE(j["result"].contains("submersion_defect"));
}

TEST_CASE("profile and plotdata") {
  const auto csv = scratch("profile.csv");
  REQUIRE(run({"profile", "--diagram", "hopf", "--side", "P", "--grid", "64", "--out", csv.string()}).code == 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "t,w,h");
  CHECK(std::filesystem::exists(csv.string() + ".json"));

  const auto plotted = run({"plotdata", "--input", csv.string()});
  CHECK(plotted.code == 0);
  CHECK(plotted.out.rfind("t,w,h\n", 0) == 0);

  const auto report = scratch("compare.json");
  REQUIRE(run({"compare", "--diagram", "hopf", "--grid", "64", "--out", report.string()}).code == 0);
  const auto svg = scratch("compare.svg");
  const auto paired = run({"plotdata", "--input", report.string(), "--svg", svg.string()});
  CHECK(paired.code == 0);
  CHECK(paired.out.rfind("index,lambda_M,lambda_Mprime,relgap\n", 0) == 0);
  CHECK(std::filesystem::file_size(svg) > 0);

  const auto junk = scratch("junk.json");
  std::ofstream(junk) << "{\"command\": \"compare\"}";
  CHECK(run({"plotdata", "--input", junk.string()}).code == 5);
  std::ofstream(junk) << "t,w,h\n0,zero,1\n";
  CHECK(run({"plotdata", "--input", junk.string()}).code == 5);
  CHECK(run({"plotdata", "--input", scratch("missing.json").string()}).code == 5);
}

TEST_CASE("identical configs give identical bytes") {
  const std::vector<std::string> args{"verify", "--diagram", "hopf", "--samples", "100", "--seed", "3"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> w{"warp", "--diagram", "trivial-s2", "--grid", "128", "--scales", "1"};
  CHECK(run(w).out == run(w).out);
}

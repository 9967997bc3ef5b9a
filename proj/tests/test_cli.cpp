#include "cli.hpp"
#include "oracles.hpp"
#include "process.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace fkdet;
using cli::Json;

namespace {

struct Run {
  int code;
  std::string out;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

}  // namespace

TEST(Cli, MahlerJensen) {
  const auto r = run({"mahler", "--poly", "x - 2", "--dim", "1", "--method", "jensen"});
  ASSERT_EQ(r.code, 0);
  const auto j = r.json();
  EXPECT_EQ(j["schema"], "fkdet-report/1");
  EXPECT_EQ(j["input"]["poly"], "x - 2");
  EXPECT_NEAR(j["value"].get<double>(), std::log(2.0), 1e-12);
  EXPECT_GT(j["tolerance"].get<double>(), 0.0);
}

TEST(Cli, MahlerQuadratureCarriesTolerance) {
  const auto r = run({"mahler", "--poly", "3 + x + y", "--dim", "2", "--method", "quadrature", "--grid-n", "32"});
  ASSERT_EQ(r.code, 0);
  const auto j = r.json();
  EXPECT_NEAR(j["value"].get<double>(), std::log(3.0), 1e-6);
  EXPECT_TRUE(j["tolerance"].is_number());
}

TEST(Cli, PadicEntropyLimitIsLogOfThree) {
  const auto r = run({"padic-entropy", "--poly", "3*x - 10", "--dim", "1", "--prime", "5", "--boxes", "2,4,8,16"});
  ASSERT_EQ(r.code, 0);
  const auto j = r.json();
  const auto& limit = j["table"]["limit_estimate"];
  const PadicScalar expected = iwasawa_log(padic_of_integer(3, 5, 32));
  const std::int64_t v = limit["valuation"].get<std::int64_t>();
  EXPECT_EQ(v, expected.valuation());
  // (1/16) log_5(10^16 - 3^16) agrees with log_5(3) to about 14 digits.
  const auto digits = limit["unit_digits"].get<std::vector<std::uint64_t>>();
  const auto want = expected.unit_digits();
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(digits[i], want[i]) << i;
  EXPECT_EQ(j["table"]["entries"].size(), 4u);
}

TEST(Cli, ParseErrorExitsTwoWithPosition) {
  const auto r = run({"mahler", "--poly", "x^", "--dim", "1"});
  EXPECT_EQ(r.code, 2);
  const auto j = r.json();
  EXPECT_EQ(j["error"]["kind"], "ParseError");
  EXPECT_EQ(j["error"]["position"], 2);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"mahler", "--poly", "x", "--method", "simpson"}).code, 2);
  EXPECT_EQ(run({"fixcount", "--poly", "x + y", "--dim", "2", "--boxes", "2x2x2"}).code, 2);
  EXPECT_EQ(run({"padic-mahler", "--poly", "x - 3"}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"mahler"}).code, 2);
}

TEST(Cli, PreconditionViolationsExitThree) {
  EXPECT_EQ(run({"padic-entropy", "--poly", "z - 3", "--prime", "5"}).code, 3);
  EXPECT_EQ(run({"mp-sigma", "--poly", "z - 5", "--prime", "5"}).code, 3);
  EXPECT_EQ(run({"mahler", "--poly", "0"}).code, 3);
  EXPECT_EQ(run({"heisenberg", "--poly", "y*z - y", "--method", "heisenberg"}).code, 3);
  EXPECT_EQ(run({"padic-expansive", "--poly", "x", "--prime", "6"}).code, 3);
}

TEST(Cli, StrictInconclusiveExitsFour) {
  EXPECT_EQ(run({"fk-limit", "--poly", "z - 1", "--strict"}).code, 4);
  EXPECT_EQ(run({"fk-limit", "--poly", "z - 1"}).code, 0);
  EXPECT_EQ(run({"fk-limit", "--poly", "z - 2", "--n-list", "64,128,256", "--strict"}).code, 0);
}

TEST(Cli, CsvTable) {
  const auto r = run({"fk-limit", "--poly", "z - 2", "--n-list", "4,8", "--csv"});
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header, "index,value,difference");
  EXPECT_EQ(row1.substr(0, 2), "4,");
  const double v = std::stod(row2.substr(2, row2.find(',', 2) - 2));
  EXPECT_NEAR(v, std::log(255.0) / 8, 1e-12);
}

TEST(Cli, EveryCommandProducesAReport) {
  const std::vector<std::vector<std::string>> invocations = {
      {"entropy", "--poly", "z - 2"},
      {"expansive", "--poly", "3 + x + y", "--dim", "2"},
      {"fixcount", "--poly", "z - 2", "--boxes", "5,6"},
      {"padic-expansive", "--poly", "3*z - 10", "--prime", "5"},
      {"padic-mahler", "--poly", "3*z - 10", "--prime", "5", "--precision", "8"},
      {"padic-mahler", "--poly", "3*z - 10", "--prime", "5", "--precision", "8", "--method", "snirelman", "--n-list", "1,2,3,4"},
      {"padic-det", "--poly", "3*z - 10", "--prime", "5", "--precision", "8"},
      {"mp-sigma", "--poly", "2*z - 1", "--prime", "5"},
      {"heisenberg", "--poly", "y + z", "--grid-n", "32"},
  };
  for (const auto& args : invocations) {
    const auto r = run(args);
    ASSERT_EQ(r.code, 0) << args[0] << "\n" << r.out;
    const auto j = r.json();
    EXPECT_EQ(j["command"], args[0]);
    EXPECT_TRUE(j.contains("flags"));
    EXPECT_FALSE(j["route"].get<std::string>().empty());
  }
}

TEST(Cli, FixcountIsExact) {
  const auto j = run({"fixcount", "--poly", "z - 2", "--boxes", "64"}).json();
  EXPECT_EQ(j["counts"][0]["fixed_points"], "18446744073709551615");
}

TEST(Cli, HeisenbergInputUsesYAndZ) {
  const auto j = run({"heisenberg", "--poly", "z + y", "--grid-n", "16", "--method", "heisenberg"}).json();
  EXPECT_EQ(j["input"]["variables"], Json::array({"y", "z"}));
  EXPECT_EQ(j["input"]["poly"], "y + z");
}

TEST(Cli, EchoRoundTripsOnCorpus) {
  for (const auto& f : oracle::round_trip_corpus()) {
    const auto text = render(f);
    const auto r = run({"padic-expansive", "--poly", text, "--dim", std::to_string(f.dim()), "--prime", "7"});
    ASSERT_EQ(r.code, 0) << text;
    const auto echoed = r.json()["input"]["poly"].get<std::string>();
    EXPECT_EQ(parse_poly(echoed, f.dim()), f) << text;
    EXPECT_EQ(echoed, text);
  }
}

TEST(Cli, BinaryIsDeterministic) {
  const std::vector<std::vector<std::string>> invocations = {
      {"entropy", "--poly", "3 + x + y", "--dim", "2"},
      {"padic-det", "--poly", "3*z - 10", "--prime", "5", "--precision", "12"},
      {"heisenberg", "--poly", "y + 2*z - 1", "--grid-n", "32"},
  };
  for (const auto& args : invocations) {
    const auto a = oracle::run_process(FKDET_CLI_PATH, args);
    const auto b = oracle::run_process(FKDET_CLI_PATH, args);
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_FALSE(a.output.empty());
    EXPECT_EQ(a.output, b.output) << args[0];
  }
}

TEST(Cli, BinaryExitCodes) {
  EXPECT_EQ(oracle::run_process(FKDET_CLI_PATH, {"mahler", "--poly", "x^", "--dim", "1"}).exit_code, 2);
  EXPECT_EQ(oracle::run_process(FKDET_CLI_PATH, {"padic-entropy", "--poly", "z - 3", "--prime", "5"}).exit_code, 3);
  EXPECT_EQ(oracle::run_process(FKDET_CLI_PATH, {"fk-limit", "--poly", "z - 1", "--strict"}).exit_code, 4);
}

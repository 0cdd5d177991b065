#include "maxbias/cli.hpp"
#include "maxbias/format.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace maxbias;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string roundtrip(const std::string& csv) {
  std::istringstream in(csv);
  const auto table = normalize_numbers(read_csv(in));
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

CsvTable parse(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in);
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(1234567890123.0) == "1.23456789e+12");
  CHECK(parse_number("inf") == kInf);
  CHECK(parse_number("0.25") == 0.25);
  CHECK_THROWS_AS(parse_number("abc"), DomainError);
  CHECK_THROWS_AS(parse_number("1.5x"), DomainError);
  CHECK_THROWS_AS(parse_number(""), DomainError);
}

TEST_CASE("grid parsing") {
  const auto g = cli::parse_linear_grid("0.01:0.49:0.01");
  CHECK(g.size() == 49);
  CHECK(g.back() == doctest::Approx(0.49));
  CHECK(cli::parse_linear_grid("0.1:0.1:0.5").size() == 1);
  CHECK_THROWS_AS(cli::parse_linear_grid("0.1:0.5"), DomainError);
  CHECK_THROWS_AS(cli::parse_linear_grid("0.1:0.5:0"), DomainError);
  CHECK_THROWS_AS(cli::parse_linear_grid("0.5:0.1:0.1"), DomainError);
  const auto lg = cli::parse_log_grid("0.01:100:5");
  REQUIRE(lg.size() == 5);
  CHECK(lg[2] == doctest::Approx(1.0));
  CHECK(lg[4] == 100.0);
  CHECK_THROWS_AS(cli::parse_log_grid("0:1:10"), DomainError);
  CHECK_THROWS_AS(cli::parse_log_grid("0.1:1:2.5"), DomainError);
}

TEST_CASE("curve: CM figure data") {
  const auto r = run({"curve", "--estimator", "cm", "--rho", "biweight", "--b", "0.5", "--c", "4.835",
                      "--model", "gaussian", "--grid", "0.01:0.49:0.01"});
  CHECK(r.code == 0);
  const auto t = parse(r.out);
  CHECK(t.header == std::vector<std::string>{"eps", "lower", "upper", "exact"});
  CHECK(t.rows.size() == 49);
  CHECK(roundtrip(r.out) == r.out);
}

TEST_CASE("curve: MM interval under the Cauchy model") {
  const auto r = run({"curve", "--estimator", "mm", "--k1", "1.56", "--k2", "4.68", "--b", "0.5", "--model",
                      "cauchy", "--grid", "0.01:0.49:0.01"});
  CHECK(r.code == 0);
  const auto t = parse(r.out);
  REQUIRE(t.rows.size() == 49);
  CHECK(t.rows.front()[3] == "1");
  CHECK(t.rows.back()[2] == "inf");
  CHECK(t.rows.back()[3] == "0");
  CHECK(roundtrip(r.out) == r.out);
}

TEST_CASE("curve: input errors") {
  CHECK(run({"curve", "--estimator", "s", "--b", "0.5", "--grid", "0.1:0.6:0.1"}).code == cli::kBreakdownViolation);
  CHECK(run({"curve", "--estimator", "cm", "--b", "0.5", "--grid", "0.1:0.3:0.1"}).code == cli::kBadInput);
  CHECK(run({"curve", "--estimator", "xx", "--grid", "0.1:0.3:0.1"}).code == cli::kBadInput);
  CHECK(run({"curve", "--estimator", "s", "--b", "1.5", "--grid", "0.1:0.3:0.1"}).code == cli::kBadInput);
  CHECK(run({"curve", "--estimator", "s", "--bogus", "1"}).code == cli::kBadInput);
  CHECK(run({"curve", "--estimator", "s"}).code == cli::kBadInput);
  CHECK(run({}).code == cli::kBadInput);
  CHECK(run({"curve", "--estimator", "s", "--grid", "-0.1:0.3:0.1"}).code == cli::kBadInput);
}

TEST_CASE("phi: unimodal column and step-loss peak") {
  const auto r = run({"phi", "--rho", "biweight", "--k", "4.68", "--model", "gaussian", "--grid", "0.01:100:201"});
  CHECK(r.code == 0);
  const auto t = parse(r.out);
  CHECK(t.header == std::vector<std::string>{"s", "phi"});
  REQUIRE(t.rows.size() == 201);
  int changes = 0, prev = 0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double d = parse_number(t.rows[i][1]) - parse_number(t.rows[i - 1][1]);
    const int sg = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (sg != 0 && prev != 0 && sg != prev) ++changes;
    if (sg != 0) prev = sg;
  }
  CHECK(changes == 1);
  CHECK(roundtrip(r.out) == r.out);

  const auto q = parse(run({"phi", "--rho", "quantile", "--grid", "0.1:10:201"}).out);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < q.rows.size(); ++i) {
    if (parse_number(q.rows[i][1]) > parse_number(q.rows[arg][1])) arg = i;
  }
  CHECK(parse_number(q.rows[arg][0]) == doctest::Approx(1.0));

  CHECK(run({"phi", "--grid", "0:1:10"}).code == cli::kBadInput);
  CHECK(run({"phi", "--grid", "-1:1:10"}).code == cli::kBadInput);
}

TEST_CASE("tune") {
  const auto r = run({"tune", "--estimator", "cm", "--b", "0.5", "--target-eff", "0.95"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("c=4.8", 0) == 0);
  const auto bad = run({"tune", "--estimator", "cm", "--b", "0.5", "--target-eff", "1.2"});
  CHECK(bad.code == cli::kBadInput);
  CHECK(bad.err.find("attainable") != std::string::npos);
  CHECK(run({"tune", "--estimator", "mm", "--target-eff", "0.95"}).out.rfind("k2=4.6", 0) == 0);
  CHECK(run({"tune", "--estimator", "s", "--target-eff", "0.95"}).out.rfind("b=0.11", 0) == 0);
  CHECK(run({"tune", "--estimator", "s", "--solve", "consistency", "--b", "0.5"}).out.rfind("k=1.54", 0) == 0);
  CHECK(run({"tune", "--estimator", "s", "--solve", "what"}).code == cli::kBadInput);
}

TEST_CASE("dominance report") {
  const auto r = run({"dominance", "--rho", "biweight", "--b", "0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict=Dominated\n") != std::string::npos);
  std::istringstream in(r.out);
  std::string line;
  double lo = 0.0, hi = 0.0;
  while (std::getline(in, line) && !line.empty()) {
    const auto eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    if (line.substr(0, eq) == "interval_lo") lo = parse_number(line.substr(eq + 1));
    if (line.substr(0, eq) == "interval_hi") hi = parse_number(line.substr(eq + 1));
  }
  CHECK(lo < 2.568);
  CHECK(2.568 <= hi);
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(rest.rfind("eps,c_eps\n", 0) == 0);
  CHECK(parse(rest).rows.size() == 512);
  CHECK(roundtrip(rest) == rest);
  CHECK(run({"dominance", "--b", "0.3"}).out.find("verdict=Inapplicable") != std::string::npos);
  CHECK(run({"dominance", "--model", "cauchy"}).code == cli::kBadInput);
}

TEST_CASE("table and check") {
  const auto t = run({"table", "--laws", "NORM,SL"});
  CHECK(t.code == 0);
  const auto csv = parse(t.out);
  CHECK(csv.header == std::vector<std::string>{"estimator", "law", "avar", "binding"});
  CHECK(csv.rows.size() == 10);
  CHECK(roundtrip(t.out) == t.out);
  CHECK(run({"table", "--laws", "XX"}).code == cli::kBadInput);

  const auto c = run({"check", "--rho", "quantile"});
  CHECK(c.code == 0);
  CHECK(c.out.find("FAIL") == std::string::npos);
  CHECK(c.out.find("1 jump(s)") != std::string::npos);
  CHECK(c.out.find("PASS phi unimodal") != std::string::npos);
}

TEST_CASE("outputs are deterministic and --out writes a file") {
  const std::vector<std::string> args{"curve", "--estimator", "mm", "--b", "0.5", "--grid", "0.05:0.45:0.05"};
  CHECK(run(args).out == run(args).out);
  const auto path = (std::filesystem::temp_directory_path() / "maxbias_cli_test.csv").string();
  auto with_out = args;
  with_out.insert(with_out.end(), {"--out", path});
  const auto r = run(with_out);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string contents((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(contents == run(args).out);
  std::remove(path.c_str());
}

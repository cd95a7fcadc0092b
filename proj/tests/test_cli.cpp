#include "support.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using namespace qpower;
using Catch::Approx;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

using Table = std::vector<std::vector<std::string>>;

Table csv_rows(const std::string& text) {
  Table rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column(const Table& t, const std::string& name) {
  const auto it = std::find(t[0].begin(), t[0].end(), name);
  REQUIRE(it != t[0].end());
  return static_cast<std::size_t>(it - t[0].begin());
}

double h2(double p) { return testing::plogp_sum({p, 1.0 - p}); }

const std::string kIdentity = R"({"kind":"identity","d":2})";
const std::string kDepolarizing = R"({"kind":"depolarizing","d":2})";

}  // namespace

TEST_CASE("curve row count is the grid product", "[cli]") {
  const auto r = invoke({"curve", "--channel", kDepolarizing, "--ensemble", "computational", "--lambda-grid",
                         "0,0.25,0.5", "--B-min", "-1", "--B-max", "0.9", "--B-points", "7"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 1 + 3 * 7);
  CHECK(rows[0][0] == "lambda");
  CHECK(rows[0][1] == "B");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].size() == rows[0].size());

  const auto single = invoke({"curve", "--channel", kIdentity, "--ensemble", "computational", "--B-points", "5"});
  REQUIRE(single.code == cli::kOk);
  CHECK(csv_rows(single.out).size() == 1 + 5);
}

TEST_CASE("orthogonal pair through the identity at B = 0.75", "[cli]") {
  const auto json = invoke({"point", "--channel", kIdentity, "--ensemble", "computational", "--hamiltonian",
                            "0,1", "--B", "0.75", "--format", "json", "--units", "bits"});
  REQUIRE(json.code == cli::kOk);
  const Json j = Json::parse(json.out);
  CHECK(j.at("schema") == "qpower/1");
  CHECK(j.at("status") == "Converged");
  CHECK(j.at("value").get<double>() == Approx(0.811278).margin(5e-7));
  CHECK(j.at("value_nats").get<double>() == Approx(h2(0.75)).margin(1e-7));

  const auto csv = invoke({"curve", "--channel", kIdentity, "--ensemble", "computational", "--hamiltonian", "0,1",
                           "--B-min", "0.75", "--B-points", "1"});
  REQUIRE(csv.code == cli::kOk);
  const auto t = csv_rows(csv.out);
  REQUIRE(t.size() == 2);
  CHECK(std::stod(t[1][column(t, "capacity_bits")]) == Approx(0.811278).margin(5e-7));
}

TEST_CASE("exit codes", "[cli]") {
  CHECK(invoke({"curve", "--channel", "/nonexistent/channel.json", "--ensemble", "computational"}).code ==
        cli::kConfigError);
  CHECK(invoke({"verify", "no-such-suite"}).code == cli::kConfigError);
  CHECK(invoke({}).code == cli::kConfigError);
  CHECK(invoke({"curve", "--bogus"}).code == cli::kConfigError);
  CHECK(invoke({"curve", "--channel", kIdentity, "--restarts", "4"}).code == cli::kConfigError);
  CHECK(invoke({"curve", "--channel", kIdentity, "--ensemble", "computational", "--B-min", "1", "--B-max", "0"})
            .code == cli::kConfigError);
  CHECK(invoke({"point", "--channel", kIdentity, "--ensemble", "computational", "--B", "0.1", "--lambda-grid",
                "0.1"})
            .code == cli::kConfigError);
  CHECK(invoke({"classical", "--kind", "ternary"}).code == cli::kConfigError);

  const auto missing = invoke({"curve", "--channel", "/nonexistent/channel.json"});
  CHECK(missing.code == cli::kConfigError);
  CHECK(!missing.err.empty());
}

TEST_CASE("infeasible thresholds and strict mode", "[cli]") {
  const std::vector<std::string> base{"point", "--channel", kIdentity, "--ensemble", "computational",
                                      "--hamiltonian", "0,1", "--B", "1.05", "--format", "json"};
  const auto lax = invoke(base);
  CHECK(lax.code == cli::kOk);
  CHECK(Json::parse(lax.out).at("status") == "Infeasible");
  auto strict_args = base;
  strict_args.push_back("--strict");
  CHECK(invoke(strict_args).code == cli::kPropertyFailure);
}

TEST_CASE("identical configuration gives byte-identical output", "[cli][property]") {
  const std::vector<std::string> args{"curve",      "--channel", kDepolarizing, "--lambda-grid", "0.1,0.3",
                                      "--restarts", "3",         "--seed",      "11",            "--B-points",
                                      "4"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);

  const std::string path = "cli_determinism_test.csv";
  auto to_file = args;
  to_file.insert(to_file.end(), {"--out", path});
  REQUIRE(invoke(to_file).code == cli::kOk);
  std::ifstream in(path, std::ios::binary);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);
  std::remove(path.c_str());

  const auto mc1 = invoke({"randstates", "--levels", "0,0.5,1,2", "--mc", "300", "--seed", "4", "--B-points", "5"});
  const auto mc2 = invoke({"randstates", "--levels", "0,0.5,1,2", "--mc", "300", "--seed", "4", "--B-points", "5"});
  CHECK(mc1.out == mc2.out);
}

TEST_CASE("units flag rescales values by 1/ln 2 and nothing else", "[cli][property]") {
  const std::vector<std::string> base{"curve",    "--channel", kDepolarizing, "--ensemble",
                                      "trine",    "--lambda-grid", "0,0.4", "--B-points",
                                      "6",        "--format",  "json"};
  auto nats_args = base;
  nats_args.insert(nats_args.end(), {"--units", "nats"});
  auto bits_args = base;
  bits_args.insert(bits_args.end(), {"--units", "bits"});
  Json nats = Json::parse(invoke(nats_args).out);
  Json bits = Json::parse(invoke(bits_args).out);
  REQUIRE(nats.at("points").size() == 12);
  for (std::size_t k = 0; k < nats.at("points").size(); ++k) {
    auto& pn = nats["points"][k];
    auto& pb = bits["points"][k];
    if (pn.at("value").is_null()) {
      // Infeasible points carry no value in either unit.
      CHECK(pb.at("value").is_null());
    } else {
      CHECK(pb.at("value").get<double>() == nats_to_bits(pn.at("value").get<double>()));
      CHECK(pb.at("value").get<double>() == Approx(pn.at("value").get<double>() / std::log(2.0)).epsilon(1e-15));
    }
    pn.erase("value");
    pb.erase("value");
  }
  CHECK(nats.at("units") == "nats");
  CHECK(bits.at("units") == "bits");
  nats.erase("units");
  bits.erase("units");
  CHECK(nats == bits);
}

TEST_CASE("verify subcommand", "[cli]") {
  const auto r = invoke({"verify", "concavity", "--channel", "cq-random", "--seed", "7"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.rfind("PASS concavity", 0) == 0);

  const auto j = invoke({"verify", "gradient", "holevo-bound", "--format", "json"});
  REQUIRE(j.code == cli::kOk);
  const Json doc = Json::parse(j.out);
  CHECK(doc.at("schema") == "qpower/1");
  CHECK(doc.at("suites").size() == 2);
  CHECK(invoke({"verify"}).code == cli::kConfigError);
}

TEST_CASE("randstates subcommand", "[cli]") {
  const auto r = invoke({"randstates", "--levels", "0,1", "--B-min", "0", "--B-max", "1.5", "--B-points", "7"});
  REQUIRE(r.code == cli::kOk);
  const auto t = csv_rows(r.out);
  REQUIRE(t.size() == 8);
  CHECK(t[0] == std::vector<std::string>{"B", "analytic_nats", "status"});
  CHECK(std::stod(t[1][1]) == Approx(0.270363).margin(5e-7));
  CHECK(std::stod(t[2][1]) == Approx(0.270363).margin(5e-7));
  CHECK(std::stod(t[3][1]) == Approx(0.270363).margin(5e-7));
  CHECK(std::stod(t[4][1]) == Approx(h2(0.75) - 0.422784).margin(1e-9));
  CHECK(t[5][2] == "OutOfRange");
  CHECK(t[7][2] == "OutOfRange");
  CHECK(t[7][0] == "1.5");
  CHECK(invoke({"randstates", "--levels", "0,1", "--B-max", "1.5", "--strict"}).code == cli::kPropertyFailure);

  const auto mc = invoke({"randstates", "--levels", "[0,1]", "--mc", "5000", "--seed", "2", "--B-points", "3",
                          "--B-max", "0.9"});
  REQUIRE(mc.code == cli::kOk);
  const auto m = csv_rows(mc.out);
  CHECK(m[0] == std::vector<std::string>{"B", "analytic_nats", "mc_mean_nats", "mc_stderr", "status"});
  CHECK(m.size() == 4);

  const auto stds = invoke({"randstates", "--std-dims", "2,8,64", "--mc", "2000", "--seed", "1"});
  const auto s = csv_rows(stds.out);
  REQUIRE(s.size() == 4);
  CHECK(std::stod(s[3][1]) < std::stod(s[2][1]));

  CHECK(invoke({"randstates", "--levels", "0,1", "--mc", "10"}).code == cli::kConfigError);
}

TEST_CASE("classical subcommand", "[cli]") {
  const auto bsc = invoke({"classical", "--kind", "bsc", "--p", "0.1", "--B-min", "0", "--B-max", "0.9"});
  REQUIRE(bsc.code == cli::kOk);
  const auto t = csv_rows(bsc.out);
  REQUIRE(t.size() == 22);
  const auto v = column(t, "capacity_nats");
  const auto cf = column(t, "closed_form_nats");
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(std::abs(std::stod(t[i][v]) - std::stod(t[i][cf])) <= 1e-4);

  const auto bec = invoke({"classical", "--kind", "bec", "--p", "0"});
  const auto noiseless = invoke({"classical", "--kind", "noiseless"});
  const auto a = csv_rows(bec.out);
  const auto b = csv_rows(noiseless.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i)
    CHECK(std::stod(a[i][1]) == Approx(std::stod(b[i][1])).margin(1e-9));

  const auto tail = invoke({"classical", "--kind", "bsc", "--p", "0.1", "--B-min", "0.5", "--B-max", "1.0",
                            "--B-points", "6"});
  REQUIRE(tail.code == cli::kOk);
  const auto u = csv_rows(tail.out);
  const auto status = column(u, "status");
  CHECK(u[5][status] == "Converged");
  CHECK(u[6][status] == "Infeasible");
  CHECK(invoke({"classical", "--kind", "bsc", "--p", "0.1", "--B-max", "1.0", "--strict"}).code ==
        cli::kPropertyFailure);

  const auto custom = invoke({"classical", "--kind", "custom", "--channel", R"({"Q":[[1,0],[0,1]],"b":[0,1]})",
                              "--format", "json"});
  REQUIRE(custom.code == cli::kOk);
  CHECK(Json::parse(custom.out).at("schema") == "qpower/1");
}

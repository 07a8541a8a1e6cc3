#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opcqkd/runners.hpp"

using namespace opcqkd;
using namespace opcqkd::runners;
using nlohmann::json;

namespace {

std::string strip_timestamp(const std::string& payload) {
  json j = json::parse(payload);
  j.erase("timestamp");
  return j.dump(2);
}

int count_columns(const std::string& line) {
  return static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
}

const char* kSmallConfig = R"({
  "n_cores": 1,
  "q_perturbations": 2,
  "n_rounds": 400,
  "seed": 9,
  "eve": "none"
})";

}  // namespace

TEST_CASE("run_verify: symmetric channels collapse to D") {
  VerifyOptions opts;
  opts.dim = 8;
  opts.q = 5;
  opts.trials = 100;
  opts.seed = 3;
  const auto report = run_verify(opts);
  CHECK(report.pass);
  CHECK(report.max_deviation <= 1e-9);
}

TEST_CASE("run_verify: q = 0 leaves only the HWP, deviation exactly zero") {
  VerifyOptions opts;
  opts.dim = 4;
  opts.q = 0;
  opts.trials = 5;
  const auto report = run_verify(opts);
  CHECK(report.max_deviation == 0.0);
}

TEST_CASE("run_verify rejects odd or tiny dimensions") {
  VerifyOptions opts;
  opts.dim = 3;
  CHECK_THROWS_AS(run_verify(opts), std::invalid_argument);
  opts.dim = 0;
  CHECK_THROWS_AS(run_verify(opts), std::invalid_argument);
}

TEST_CASE("session config parsing: defaults, fields, diagnostics") {
  const auto cfg = parse_session_config(kSmallConfig, "inline");
  CHECK(cfg.n_cores == 1);
  CHECK(cfg.q_perturbations == 2);
  CHECK(cfg.n_rounds == 400);
  CHECK(cfg.seed == 9);
  CHECK(cfg.eve == protocol::EveModel::None);
  CHECK(cfg.opc_enabled);
  CHECK(cfg.intensities.size() == 3);
  CHECK(cfg.intensities[0].mu == 0.5);

  // Unknown field is named in the error.
  try {
    parse_session_config(R"({"n_cores": 1, "bogus": 3})", "inline");
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }

  // Malformed JSON reports line and column.
  try {
    parse_session_config("{\n  \"n_cores\": ,\n}", "inline");
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("inline:2") != std::string::npos);
  }

  // Wrong field type names the field.
  try {
    parse_session_config(R"({"n_cores": "two"})", "inline");
    CHECK(false);
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("n_cores") != std::string::npos);
  }
}

TEST_CASE("a config without a seed gets one, and it lands in the manifest") {
  const auto cfg = parse_session_config(R"({"n_cores": 1, "n_rounds": 50})",
                                        "inline");
  protocol::SessionStats stats;
  const json j = json::parse(session_manifest(cfg, stats));
  CHECK(j["seed"] == cfg.seed);
  CHECK(j["config"]["seed"] == cfg.seed);
}

TEST_CASE("missing config file raises before any output is written") {
  CHECK_THROWS_AS(load_session_config("/nonexistent/config.json"),
                  std::runtime_error);
}

TEST_CASE("session manifest is valid JSON with the expected fields") {
  const auto cfg = parse_session_config(kSmallConfig, "inline");
  const auto stats = protocol::run_session(cfg);
  const auto payload = session_manifest(cfg, stats);

  const json j = json::parse(payload);
  CHECK(j["artifact"] == "opcqkd");
  CHECK(j["command"] == "session");
  CHECK(j.contains("timestamp"));
  CHECK(j["results"]["qber"] == 0.0);
  CHECK(j["results"]["errors"] == 0);
  CHECK(j["results"]["intensities"].size() == 3);
  CHECK(j["config"]["n_cores"] == 1);
}

TEST_CASE("manifests are deterministic once timestamps are stripped") {
  const auto cfg = parse_session_config(kSmallConfig, "inline");
  const auto a = session_manifest(cfg, protocol::run_session(cfg));
  const auto b = session_manifest(cfg, protocol::run_session(cfg));
  CHECK(strip_timestamp(a) == strip_timestamp(b));

  VerifyOptions opts;
  opts.dim = 4;
  opts.q = 2;
  opts.trials = 10;
  const auto va = verify_manifest(opts, run_verify(opts));
  const auto vb = verify_manifest(opts, run_verify(opts));
  CHECK(strip_timestamp(va) == strip_timestamp(vb));
}

TEST_CASE("sweep CSV: fixed header, constant width, zero QBER column") {
  const auto cfg = parse_session_config(kSmallConfig, "inline");
  const auto csv = run_sweep_csv(cfg, "q_perturbations",
                                 {0, 1, 2, 3, 4, 5, 6, 7, 8});

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "value,qber,gain_signal,gain_decoy,sifted_fraction");

  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(count_columns(line) == 5);
    // qber is the second column; the noiseless loop keeps it at 0.
    const auto first_comma = line.find(',');
    const auto second_comma = line.find(',', first_comma + 1);
    CHECK(line.substr(first_comma + 1, second_comma - first_comma - 1) == "0");
    ++rows;
  }
  CHECK(rows == 9);

  const auto again = run_sweep_csv(cfg, "q_perturbations",
                                   {0, 1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(csv == again);
}

TEST_CASE("sweep over mu_signal raises the signal gain") {
  const auto cfg = parse_session_config(R"({
    "n_cores": 1, "q_perturbations": 1, "n_rounds": 4000, "seed": 21
  })", "inline");
  const auto csv = run_sweep_csv(cfg, "mu_signal", {0.1, 0.5});

  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  std::vector<double> gains;
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::string cell;
    for (int k = 0; k < 3; ++k) std::getline(fields, cell, ',');
    gains.push_back(std::stod(cell));
  }
  REQUIRE(gains.size() == 2);
  CHECK(gains[1] > gains[0]);
}

TEST_CASE("sweep rejects unknown axes and empty value lists") {
  const auto cfg = parse_session_config(kSmallConfig, "inline");
  CHECK_THROWS_AS(run_sweep_csv(cfg, "does_not_exist", {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_sweep_csv(cfg, "q_perturbations", {}),
                  std::invalid_argument);
}

TEST_CASE("write_file_atomic leaves a complete file behind") {
  const std::string path = "runner_test_output.json";
  write_file_atomic(path, "{\"ok\": true}\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "{\"ok\": true}\n");
  std::remove(path.c_str());
}

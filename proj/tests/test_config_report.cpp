#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "test_instances.hpp"

using namespace stackgame;

namespace {

const char* kGoodConfig = R"({
  "game": {
    "A": [[1.0]], "B1": [[1.0]], "B2": [[1.0]],
    "Q1": [[1.0]], "R11": [[1.0]], "R12": [[1.0]],
    "Q2": [[2.0]], "R21": [[1.0]], "R22": [[1.0]],
    "gamma": 0.9, "x0": [1.0]
  }
})";

// Rewrites one "key": value occurrence so each test states only its delta.
std::string patched(const std::string& base, const std::string& needle, const std::string& repl) {
  std::string out = base;
  const auto pos = out.find(needle);
  REQUIRE(pos != std::string::npos);
  out.replace(pos, needle.size(), repl);
  return out;
}

}  // namespace

TEST_CASE("a minimal config parses with documented defaults") {
  const ScenarioConfig cfg = parse_config(kGoodConfig, "inline");
  REQUIRE(cfg.solver.tol == 1e-10);
  REQUIRE(cfg.solver.max_iters == 10000);
  REQUIRE(cfg.learner.epsilon == 1e-8);
  REQUIRE(cfg.learner.max_policy_iters == 100);
  REQUIRE(cfg.learner.N == 0);
  REQUIRE(cfg.learner.sigma1 == 0.05);
  REQUIRE(cfg.learner.state_sample_radius == 1.0);
  REQUIRE(cfg.learner.excitation == Excitation::noise);
  REQUIRE(cfg.scenario.mode == Mode::solve);
  REQUIRE(cfg.scenario.horizon == 200);
  REQUIRE_FALSE(cfg.scenario.attacker.has_value());
  REQUIRE(cfg.game.gamma == 0.9);
}

TEST_CASE("all scenario modes parse") {
  for (const auto& [name, mode] : {std::pair<const char*, Mode>{"solve", Mode::solve},
                                   {"learn", Mode::learn},
                                   {"simulate", Mode::simulate},
                                   {"compare", Mode::compare}}) {
    const std::string text = std::string(R"({"game": {
      "A": [[1.0]], "B1": [[1.0]], "B2": [[1.0]],
      "Q1": [[1.0]], "R11": [[1.0]], "R12": [[1.0]],
      "Q2": [[2.0]], "R21": [[1.0]], "R22": [[1.0]],
      "gamma": 0.9, "x0": [1.0]}, "scenario": {"mode": ")") +
                             name + "\"}}";
    REQUIRE(parse_config(text, "inline").scenario.mode == mode);
  }
}

TEST_CASE("unknown fields are rejected by name") {
  const std::string bad = patched(kGoodConfig, "\"gamma\": 0.9", "\"gamma\": 0.9, \"gama\": 0.5");
  try {
    parse_config(bad, "inline");
    FAIL("expected UnknownField");
  } catch (const UnknownField& e) {
    REQUIRE(std::string(e.what()).find("gama") != std::string::npos);
    REQUIRE(e.exit_code() == 11);
  }

  REQUIRE_THROWS_AS(parse_config(R"({"game": {}, "extra": 1})", "inline"), UnknownField);
}

TEST_CASE("missing and malformed fields raise ParseError") {
  // missing required matrix
  REQUIRE_THROWS_AS(parse_config(R"({"game": {"A": [[1.0]]}})", "inline"), ParseError);
  // not JSON at all
  REQUIRE_THROWS_AS(parse_config("not json", "inline"), ParseError);
  // top level must be an object
  REQUIRE_THROWS_AS(parse_config("[1,2]", "inline"), ParseError);
  // string where a number belongs
  REQUIRE_THROWS_AS(parse_config(patched(kGoodConfig, "\"gamma\": 0.9", "\"gamma\": \"x\""), "inline"),
                    ParseError);
  // ragged matrix
  REQUIRE_THROWS_AS(
      parse_config(patched(kGoodConfig, "\"Q1\": [[1.0]]", "\"Q1\": [[1.0],[2.0, 3.0]]"), "inline"),
      ParseError);
  // non-integer seed
  REQUIRE_THROWS_AS(parse_config(patched(kGoodConfig, R"("gamma": 0.9, "x0": [1.0]
  })",
                                         R"("gamma": 0.9, "x0": [1.0]
  }, "learner": {"seed": 1.5})"),
                                 "inline"),
                    ParseError);
}

TEST_CASE("game-level validation failures keep their specific codes") {
  const auto expect_inner = [](const std::string& text, ErrorCode code) {
    try {
      parse_config(text, "inline");
      FAIL("expected a validation failure");
    } catch (const ValidationError& e) {
      REQUIRE(e.exit_code() == static_cast<int>(code));
    }
  };
  expect_inner(patched(kGoodConfig, "\"gamma\": 0.9", "\"gamma\": 1.0"), ErrorCode::DiscountOutOfRange);
  expect_inner(patched(kGoodConfig, "\"x0\": [1.0]", "\"x0\": [1.0, 2.0]"), ErrorCode::DimensionMismatch);
  expect_inner(patched(kGoodConfig, "\"R11\": [[1.0]]", "\"R11\": [[0.0]]"),
               ErrorCode::NotPositiveDefinite);
  expect_inner(R"({"game": {
    "A": [[1.0, 0.0],[0.0, 1.0]], "B1": [[1.0],[0.0]], "B2": [[0.0],[1.0]],
    "Q1": [[1.0, 0.2],[0.0, 1.0]], "R11": [[1.0]], "R12": [[1.0]],
    "Q2": [[1.0, 0.0],[0.0, 1.0]], "R21": [[1.0]], "R22": [[1.0]],
    "gamma": 0.5, "x0": [1.0, 1.0]}})",
               ErrorCode::NotSymmetric);
  // overflowing literals die at the JSON layer; nothing non-finite gets through
  REQUIRE_THROWS_AS(parse_config(patched(kGoodConfig, "\"gamma\": 0.9", "\"gamma\": 1e999"), "inline"),
                    ParseError);
}

TEST_CASE("option blocks validate their ranges") {
  const auto with_block = [&](const std::string& block) {
    return patched(kGoodConfig, R"(, "x0": [1.0]
  }
})",
                   ", \"x0\": [1.0]}, " + block + "}");
  };
  REQUIRE_THROWS_AS(parse_config(with_block(R"("solver": {"tol": 0.0})"), "inline"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("solver": {"max_iters": 0})"), "inline"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"epsilon": -1.0})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"sigma1": -0.1})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"N": -3})"), "inline"), ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"state_sample_radius": 0.0})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"ridge": -1e-4})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("learner": {"excitation": "plaid"})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("scenario": {"horizon": -1})"), "inline"),
                    ValidationError);
  REQUIRE_THROWS_AS(parse_config(with_block(R"("scenario": {"mode": "destroy"})"), "inline"),
                    ValidationError);
}

TEST_CASE("attacker weights are parsed and validated like game weights") {
  const std::string good = patched(kGoodConfig, R"(, "x0": [1.0]
  }
})",
                                   R"(, "x0": [1.0]},
  "scenario": {"mode": "simulate",
    "attacker_weights": {"Q2": [[2.0]], "R21": [[1.0]], "R22": [[1.0]]}}})");
  const ScenarioConfig cfg = parse_config(good, "inline");
  REQUIRE(cfg.scenario.attacker.has_value());
  REQUIRE(cfg.scenario.attacker->Q(0, 0) == 2.0);

  const std::string bad = patched(good, "\"R21\": [[1.0]]", "\"R21\": [[-1.0]]");
  try {
    parse_config(bad, "inline");
    FAIL("expected a validation failure");
  } catch (const ValidationError& e) {
    REQUIRE(e.exit_code() == static_cast<int>(ErrorCode::NotPositiveDefinite));
  }

  // all three blocks are required once the key appears
  const std::string partial = patched(good, R"("R22": [[1.0]]})", "\"R22x\": [[1.0]]}");
  REQUIRE_THROWS_AS(parse_config(partial, "inline"), Error);
}

TEST_CASE("load_config surfaces I/O failures") {
  REQUIRE_THROWS_AS(load_config("/this/path/does/not/exist.json"), Io);
}

TEST_CASE("seventeen significant digits round-trip doubles exactly") {
  for (const double x : {3.141592653589793, 1.0000015803120883, -0.5004376978891223, 1e-300}) {
    const std::string s = fmt17(x);
    REQUIRE(std::stod(s) == x);
  }
}

TEST_CASE("reports serialize in a fixed order and valid JSON") {
  RunReport r;
  r.mode = "solve";
  r.n = 1;
  r.m1 = 1;
  r.m2 = 1;
  r.seed = 42;
  r.P = MatrixXd::Constant(1, 1, 1.25);
  r.K1 = MatrixXd::Constant(1, 1, 0.5);
  r.K2 = MatrixXd::Constant(1, 1, 0.5);
  r.are_residual = 1e-12;
  r.solver_iterations = 9;
  r.J1_team_predicted = 1.25;
  r.files = {"convergence.csv"};
  r.config.game = fixtures::scalar_spec();
  r.wall_clock_seconds = 0.125;

  const std::string text = report_to_json(r);
  REQUIRE(text.rfind("{\n  \"mode\": \"solve\"", 0) == 0);  // mode leads
  const auto wall = text.rfind("\"wall_clock_seconds\"");
  REQUIRE(wall != std::string::npos);
  REQUIRE(wall > text.rfind("\"config\""));  // wall clock is the last field

  const nlohmann::json parsed = nlohmann::json::parse(text);
  REQUIRE(parsed.at("mode") == "solve");
  REQUIRE(parsed.at("P")[0][0] == 1.25);
  REQUIRE(parsed.at("files")[0] == "convergence.csv");
  REQUIRE(parsed.at("config").at("game").at("gamma") == 0.9);
  REQUIRE_FALSE(parsed.contains("Pv"));  // absent optionals stay absent
}

TEST_CASE("embedded configs reparse to the same model") {
  ScenarioConfig cfg;
  cfg.game = fixtures::planar_spec();
  cfg.scenario.mode = Mode::compare;
  cfg.learner.seed = 31;

  JsonWriter w;
  w.begin_obj();
  w.key("config");
  write_config_json(w, cfg);
  w.end_obj();
  const nlohmann::json outer = nlohmann::json::parse(w.str());
  const ScenarioConfig back = parse_config(outer.at("config").dump(), "roundtrip");
  REQUIRE(back.game.A == cfg.game.A);
  REQUIRE(back.game.R22 == cfg.game.R22);  // 17-digit weight survives bit-exactly
  REQUIRE(back.scenario.mode == Mode::compare);
  REQUIRE(back.learner.seed == 31);
}

TEST_CASE("convergence logs print blank columns without a reference") {
  ConvergenceLog log;
  log.rows.push_back({1, 0.5, 0.25, 0.125});
  log.rows.push_back({2, 0.0625, -1.0, -1.0});
  const std::string csv = convergence_csv(log);
  REQUIRE(csv.rfind("iter,h_delta,k1_err,k2_err\n", 0) == 0);
  REQUIRE(csv.find("1,0.5,0.25,0.125\n") != std::string::npos);
  REQUIRE(csv.find("2,0.0625,,\n") != std::string::npos);
}

TEST_CASE("trajectory CSV carries per-step inputs and both stage costs") {
  const ValidatedGame g = validate_game(fixtures::scalar_spec());
  const TeamSolution ts = solve_team_optimal(g);
  const PlantHandle h = make_plant(g, 0);
  const Trajectory traj =
      rollout(h, linear_leader(ts.gains.K1), linear_follower(ts.gains.K2), g.x0(), 3);
  const std::string csv = trajectory_csv(traj, leader_weights(g), follower_weights(g));

  REQUIRE(csv.rfind("k,x_0,u_0,v_0,stage_cost_leader,stage_cost_follower\n", 0) == 0);
  int lines = 0;
  for (const char c : csv)
    if (c == '\n') ++lines;
  REQUIRE(lines == 4);  // header + 3 steps

  // spot the first stage costs in the second line
  const auto l1 = csv.find('\n') + 1;
  const auto row = csv.substr(l1, csv.find('\n', l1) - l1);
  const double j1 = one_step_cost(g, 1, traj.states[0], traj.u_inputs[0], traj.v_inputs[0]);
  REQUIRE(row.find(fmt17(j1)) != std::string::npos);
}

TEST_CASE("text files land on disk or fail as Io") {
  const auto path = std::filesystem::temp_directory_path() / "stackgame_write_text_sg.txt";
  write_text_file(path.string(), "hello\n");
  std::ifstream in(path);
  std::string word;
  in >> word;
  REQUIRE(word == "hello");
  std::filesystem::remove(path);

  REQUIRE_THROWS_AS(write_text_file("/nonexistent-dir/x/y.txt", "x"), Io);
}

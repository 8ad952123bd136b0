#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adp_learner.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "model_based.hpp"

namespace stackgame {

enum class Mode { solve, learn, simulate, compare };

inline std::string mode_name(Mode m) {
  switch (m) {
    case Mode::solve: return "solve";
    case Mode::learn: return "learn";
    case Mode::simulate: return "simulate";
    case Mode::compare: return "compare";
  }
  return "solve";
}

struct ScenarioOpts {
  Mode mode = Mode::solve;
  int horizon = 200;
  std::optional<CostWeights> attacker;  // substituted follower weights (Q2, R21, R22)
};

struct ScenarioConfig {
  GameSpec game;
  SolverConfig solver;
  LearnerConfig learner;
  ScenarioOpts scenario;
};

namespace cfgdetail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw UnknownField("unknown field \"" + it.key() + "\" in " + where);
}

inline double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(where + ": value must be finite");
  return v;
}

inline MatrixXd matrix_field(const json& obj, const std::string& name, const std::string& where) {
  const json& j = obj.at(name);
  if (!j.is_array() || j.empty()) throw ParseError(where + "." + name + ": expected a nonempty array of rows");
  const auto rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty())
    throw ParseError(where + "." + name + ": expected row-major nested arrays");
  const auto cols = static_cast<int>(j[0].size());
  MatrixXd X(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ParseError(where + "." + name + ": ragged rows");
    for (int c = 0; c < cols; ++c)
      X(r, c) = finite_number(j[r][c], where + "." + name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return X;
}

inline VectorXd vector_field(const json& obj, const std::string& name, const std::string& where) {
  const json& j = obj.at(name);
  if (!j.is_array() || j.empty()) throw ParseError(where + "." + name + ": expected a nonempty flat array");
  VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i)
    v(i) = finite_number(j[i], where + "." + name + "[" + std::to_string(i) + "]");
  return v;
}

inline void require_fields(const json& obj, const std::vector<std::string>& names, const std::string& where) {
  for (const auto& n : names)
    if (!obj.contains(n)) throw ParseError(where + ": missing required field \"" + n + "\"");
}

inline GameSpec parse_game(const json& j) {
  reject_unknown(j, {"A", "B1", "B2", "Q1", "Q2", "R11", "R12", "R21", "R22", "gamma", "x0"}, "game");
  require_fields(j, {"A", "B1", "B2", "Q1", "Q2", "R11", "R12", "R21", "R22", "gamma", "x0"}, "game");
  GameSpec s;
  s.A = matrix_field(j, "A", "game");
  s.B1 = matrix_field(j, "B1", "game");
  s.B2 = matrix_field(j, "B2", "game");
  s.Q1 = matrix_field(j, "Q1", "game");
  s.Q2 = matrix_field(j, "Q2", "game");
  s.R11 = matrix_field(j, "R11", "game");
  s.R12 = matrix_field(j, "R12", "game");
  s.R21 = matrix_field(j, "R21", "game");
  s.R22 = matrix_field(j, "R22", "game");
  s.gamma = finite_number(j.at("gamma"), "game.gamma");
  s.x0 = vector_field(j, "x0", "game");
  return s;
}

inline SolverConfig parse_solver(const json& j) {
  reject_unknown(j, {"tol", "max_iters"}, "solver");
  SolverConfig s;
  if (j.contains("tol")) s.tol = finite_number(j.at("tol"), "solver.tol");
  if (j.contains("max_iters")) s.max_iters = static_cast<int>(finite_number(j.at("max_iters"), "solver.max_iters"));
  if (s.tol <= 0.0) throw ValidationError("solver.tol must be positive");
  if (s.max_iters < 1) throw ValidationError("solver.max_iters must be >= 1");
  return s;
}

inline LearnerConfig parse_learner(const json& j) {
  reject_unknown(j,
                 {"epsilon", "max_policy_iters", "N", "sigma1", "sigma2", "seed", "state_sample_radius", "ridge",
                  "excitation"},
                 "learner");
  LearnerConfig c;
  if (j.contains("epsilon")) c.epsilon = finite_number(j.at("epsilon"), "learner.epsilon");
  if (j.contains("max_policy_iters"))
    c.max_policy_iters = static_cast<int>(finite_number(j.at("max_policy_iters"), "learner.max_policy_iters"));
  if (j.contains("N")) c.N = static_cast<int>(finite_number(j.at("N"), "learner.N"));
  if (j.contains("sigma1")) c.sigma1 = finite_number(j.at("sigma1"), "learner.sigma1");
  if (j.contains("sigma2")) c.sigma2 = finite_number(j.at("sigma2"), "learner.sigma2");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() && !j.at("seed").is_number_unsigned())
      throw ParseError("learner.seed: expected an integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("state_sample_radius"))
    c.state_sample_radius = finite_number(j.at("state_sample_radius"), "learner.state_sample_radius");
  if (j.contains("ridge")) c.ridge = finite_number(j.at("ridge"), "learner.ridge");
  if (j.contains("excitation")) {
    const std::string e = j.at("excitation").get<std::string>();
    if (e == "noise")
      c.excitation = Excitation::noise;
    else if (e == "deterministic")
      c.excitation = Excitation::deterministic;
    else
      throw ValidationError("learner.excitation must be \"noise\" or \"deterministic\"");
  }
  if (c.epsilon <= 0.0) throw ValidationError("learner.epsilon must be positive");
  if (c.max_policy_iters < 1) throw ValidationError("learner.max_policy_iters must be >= 1");
  if (c.N < 0) throw ValidationError("learner.N must be >= 0 (0 selects the default)");
  if (c.sigma1 < 0.0 || c.sigma2 < 0.0) throw ValidationError("learner.sigma must be >= 0");
  if (c.state_sample_radius <= 0.0) throw ValidationError("learner.state_sample_radius must be positive");
  if (c.ridge < 0.0) throw ValidationError("learner.ridge must be >= 0");
  return c;
}

inline ScenarioOpts parse_scenario(const json& j) {
  reject_unknown(j, {"mode", "horizon", "attacker_weights"}, "scenario");
  ScenarioOpts s;
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "solve")
      s.mode = Mode::solve;
    else if (m == "learn")
      s.mode = Mode::learn;
    else if (m == "simulate")
      s.mode = Mode::simulate;
    else if (m == "compare")
      s.mode = Mode::compare;
    else
      throw ValidationError("scenario.mode must be one of solve | learn | simulate | compare");
  }
  if (j.contains("horizon")) {
    s.horizon = static_cast<int>(finite_number(j.at("horizon"), "scenario.horizon"));
    if (s.horizon < 0) throw ValidationError("scenario.horizon must be >= 0");
  }
  if (j.contains("attacker_weights")) {
    const json& a = j.at("attacker_weights");
    reject_unknown(a, {"Q2", "R21", "R22"}, "scenario.attacker_weights");
    require_fields(a, {"Q2", "R21", "R22"}, "scenario.attacker_weights");
    CostWeights w;
    w.Q = matrix_field(a, "Q2", "scenario.attacker_weights");
    w.Ru = matrix_field(a, "R21", "scenario.attacker_weights");
    w.Rv = matrix_field(a, "R22", "scenario.attacker_weights");
    s.attacker = w;
  }
  return s;
}

}  // namespace cfgdetail

// Strict parse: unknown keys anywhere are rejected, all numbers must be
// finite, and the game block must validate. Game-model failures surface as
// ValidationError but keep their specific class for the exit-code mapping.
inline ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {  // parse_error, or out_of_range on overflow
    throw ParseError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError(origin + ": top level must be an object");

  try {
    cfgdetail::reject_unknown(root, {"game", "solver", "learner", "scenario"}, "config");
    if (!root.contains("game")) throw ParseError(origin + ": missing required block \"game\"");

    ScenarioConfig cfg;
    cfg.game = cfgdetail::parse_game(root.at("game"));
    if (root.contains("solver")) cfg.solver = cfgdetail::parse_solver(root.at("solver"));
    if (root.contains("learner")) cfg.learner = cfgdetail::parse_learner(root.at("learner"));
    if (root.contains("scenario")) cfg.scenario = cfgdetail::parse_scenario(root.at("scenario"));

    const ValidatedGame g = validate_game(cfg.game);  // throws with the specific class
    if (cfg.scenario.attacker) {
      GameSpec swapped = cfg.game;
      swapped.Q2 = cfg.scenario.attacker->Q;
      swapped.R21 = cfg.scenario.attacker->Ru;
      swapped.R22 = cfg.scenario.attacker->Rv;
      validate_game(swapped);  // attacker weights obey the same shape/PSD rules
    }
    (void)g;
    return cfg;
  } catch (const ValidationError&) {
    throw;
  } catch (const UnknownField&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.code(), origin + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Io("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace stackgame

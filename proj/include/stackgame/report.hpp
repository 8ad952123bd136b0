#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adp_learner.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "plant_sim.hpp"

namespace stackgame {

// 17 significant digits: the decimal form every double round-trips through
// bit-exactly, so reports are lossless.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Tiny ordered JSON emitter. nlohmann would re-format numbers; reports need
// the fixed decimal17 form and a stable field order for byte-level diffing.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  void begin_obj() { open('{'); }
  void end_obj() { close('}'); }
  void begin_arr() { open('['); }
  void end_arr() { close(']'); }

  void key(const std::string& name) {
    comma();
    out_ += '\n';
    out_.append(2 * depth_, ' ');
    out_ += '"' + name + "\": ";
    pending_value_ = true;
  }

  void value(double v) { raw(fmt17(v)); }
  void value(int v) { raw(std::to_string(v)); }
  void value(std::uint64_t v) { raw(std::to_string(v)); }
  void value(bool v) { raw(v ? "true" : "false"); }
  void value(const std::string& s) {
    std::string esc = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') esc += '\\';
      esc += c;
    }
    esc += '"';
    raw(esc);
  }

  void value(const MatrixXd& X) {
    begin_arr();
    for (int r = 0; r < X.rows(); ++r) {
      comma();
      out_ += '[';
      for (int c = 0; c < X.cols(); ++c) {
        if (c) out_ += ", ";
        out_ += fmt17(X(r, c));
      }
      out_ += ']';
      first_ = false;
    }
    end_arr();
  }

  void value(const VectorXd& v) {
    begin_arr();
    for (int i = 0; i < v.size(); ++i) {
      comma();
      out_ += fmt17(v(i));
      first_ = false;
    }
    end_arr();
  }

  template <typename T>
  void field(const std::string& name, const T& v) {
    key(name);
    value(v);
  }

 private:
  void open(char c) {
    comma();
    out_ += c;
    ++depth_;
    first_ = true;
  }
  void close(char c) {
    --depth_;
    if (!first_) {
      out_ += '\n';
      out_.append(2 * depth_, ' ');
    }
    out_ += c;
    first_ = false;
    pending_value_ = false;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_) out_ += ',';
  }
  void raw(const std::string& s) {
    comma();
    out_ += s;
    first_ = false;
    pending_value_ = false;
  }

  std::string out_;
  int depth_ = 0;
  bool first_ = true;
  bool pending_value_ = false;
};

struct RunReport {
  std::string mode;
  int n = 0, m1 = 0, m2 = 0;
  std::uint64_t seed = 0;

  // model-based quantities
  std::optional<MatrixXd> P, K1, K2, Pv, M;
  std::optional<double> are_residual, pv_residual;
  std::optional<int> solver_iterations;
  std::optional<double> alignment_error;
  std::optional<bool> alignment_ok;
  std::optional<double> J1_team_predicted;  // x0' P x0

  // learned quantities and deltas (relative Frobenius vs model-based)
  std::optional<MatrixXd> learned_K1, learned_K2, learned_M;
  std::optional<double> delta_K1, delta_K2, delta_M;
  std::optional<int> learn_iterations, incentive_iterations;

  // simulated cost summaries
  std::optional<double> J1_team, J1_attacked, J1_incentive;
  std::optional<MatrixXd> K2_attacked, K2_incentive_response;

  std::vector<std::string> files;  // convergence/trajectory CSVs written next to the report
  ScenarioConfig config;           // resolved config; re-running it reproduces the numbers
  double wall_clock_seconds = 0.0;
};

inline void write_config_json(JsonWriter& w, const ScenarioConfig& cfg) {
  w.begin_obj();
  w.key("game");
  w.begin_obj();
  w.field("A", cfg.game.A);
  w.field("B1", cfg.game.B1);
  w.field("B2", cfg.game.B2);
  w.field("Q1", cfg.game.Q1);
  w.field("Q2", cfg.game.Q2);
  w.field("R11", cfg.game.R11);
  w.field("R12", cfg.game.R12);
  w.field("R21", cfg.game.R21);
  w.field("R22", cfg.game.R22);
  w.field("gamma", cfg.game.gamma);
  w.field("x0", cfg.game.x0);
  w.end_obj();
  w.key("solver");
  w.begin_obj();
  w.field("tol", cfg.solver.tol);
  w.field("max_iters", cfg.solver.max_iters);
  w.end_obj();
  w.key("learner");
  w.begin_obj();
  w.field("epsilon", cfg.learner.epsilon);
  w.field("max_policy_iters", cfg.learner.max_policy_iters);
  w.field("N", cfg.learner.N);
  w.field("sigma1", cfg.learner.sigma1);
  w.field("sigma2", cfg.learner.sigma2);
  w.field("seed", cfg.learner.seed);
  w.field("state_sample_radius", cfg.learner.state_sample_radius);
  w.field("ridge", cfg.learner.ridge);
  w.field("excitation", std::string(cfg.learner.excitation == Excitation::noise ? "noise" : "deterministic"));
  w.end_obj();
  w.key("scenario");
  w.begin_obj();
  w.field("mode", mode_name(cfg.scenario.mode));
  w.field("horizon", cfg.scenario.horizon);
  if (cfg.scenario.attacker) {
    w.key("attacker_weights");
    w.begin_obj();
    w.field("Q2", cfg.scenario.attacker->Q);
    w.field("R21", cfg.scenario.attacker->Ru);
    w.field("R22", cfg.scenario.attacker->Rv);
    w.end_obj();
  }
  w.end_obj();
  w.end_obj();
}

inline std::string report_to_json(const RunReport& r) {
  JsonWriter w;
  w.begin_obj();
  w.field("mode", r.mode);
  w.field("n", r.n);
  w.field("m1", r.m1);
  w.field("m2", r.m2);
  w.field("seed", r.seed);

  const auto put_mat = [&](const char* name, const std::optional<MatrixXd>& X) {
    if (X) w.field(name, *X);
  };
  const auto put_num = [&](const char* name, const std::optional<double>& v) {
    if (v) w.field(name, *v);
  };
  const auto put_int = [&](const char* name, const std::optional<int>& v) {
    if (v) w.field(name, *v);
  };

  put_mat("P", r.P);
  put_mat("K1", r.K1);
  put_mat("K2", r.K2);
  put_mat("Pv", r.Pv);
  put_mat("M", r.M);
  put_num("are_residual", r.are_residual);
  put_num("pv_residual", r.pv_residual);
  put_int("solver_iterations", r.solver_iterations);
  put_num("alignment_error", r.alignment_error);
  if (r.alignment_ok) w.field("alignment_ok", *r.alignment_ok);
  put_num("J1_team_predicted", r.J1_team_predicted);

  put_mat("learned_K1", r.learned_K1);
  put_mat("learned_K2", r.learned_K2);
  put_mat("learned_M", r.learned_M);
  put_num("delta_K1", r.delta_K1);
  put_num("delta_K2", r.delta_K2);
  put_num("delta_M", r.delta_M);
  put_int("learn_iterations", r.learn_iterations);
  put_int("incentive_iterations", r.incentive_iterations);

  put_num("J1_team", r.J1_team);
  put_num("J1_attacked", r.J1_attacked);
  put_num("J1_incentive", r.J1_incentive);
  put_mat("K2_attacked", r.K2_attacked);
  put_mat("K2_incentive_response", r.K2_incentive_response);

  w.key("files");
  w.begin_arr();
  for (const auto& f : r.files) w.value(f);
  w.end_arr();

  w.key("config");
  write_config_json(w, r.config);

  w.field("wall_clock_seconds", r.wall_clock_seconds);
  w.end_obj();
  return w.str() + "\n";
}

inline std::string convergence_csv(const ConvergenceLog& log) {
  std::string s = "iter,h_delta,k1_err,k2_err\n";
  for (const auto& row : log.rows) {
    s += std::to_string(row.iter);
    s += ',';
    s += fmt17(row.h_delta);
    s += ',';
    if (row.k1_err >= 0.0) s += fmt17(row.k1_err);
    s += ',';
    if (row.k2_err >= 0.0) s += fmt17(row.k2_err);
    s += '\n';
  }
  return s;
}

// One row per applied input pair; stage costs use the weights the scenario
// actually charged (leader's, and the effective follower's for that rollout).
inline std::string trajectory_csv(const Trajectory& traj, const CostWeights& leader_w,
                                  const CostWeights& follower_w) {
  const int T = static_cast<int>(traj.u_inputs.size());
  const int n = static_cast<int>(traj.states.at(0).size());
  const int m1 = T > 0 ? static_cast<int>(traj.u_inputs[0].size()) : 0;
  const int m2 = T > 0 ? static_cast<int>(traj.v_inputs[0].size()) : 0;
  std::string s = "k";
  for (int i = 0; i < n; ++i) s += ",x_" + std::to_string(i);
  for (int i = 0; i < m1; ++i) s += ",u_" + std::to_string(i);
  for (int i = 0; i < m2; ++i) s += ",v_" + std::to_string(i);
  s += ",stage_cost_leader,stage_cost_follower\n";
  for (int k = 0; k < T; ++k) {
    s += std::to_string(k);
    for (int i = 0; i < n; ++i) s += ',' + fmt17(traj.states[k](i));
    for (int i = 0; i < m1; ++i) s += ',' + fmt17(traj.u_inputs[k](i));
    for (int i = 0; i < m2; ++i) s += ',' + fmt17(traj.v_inputs[k](i));
    s += ',' + fmt17(one_step_cost(leader_w, traj.states[k], traj.u_inputs[k], traj.v_inputs[k]));
    s += ',' + fmt17(one_step_cost(follower_w, traj.states[k], traj.u_inputs[k], traj.v_inputs[k]));
    s += '\n';
  }
  return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Io("cannot open for writing: " + path);
  out << content;
  if (!out) throw Io("write failed: " + path);
}

}  // namespace stackgame

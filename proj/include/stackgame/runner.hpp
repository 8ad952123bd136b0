#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "adp_learner.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "game_model.hpp"
#include "model_based.hpp"
#include "plant_sim.hpp"
#include "report.hpp"

namespace stackgame {

namespace rundetail {

inline ValidatedGame with_follower_weights(const ValidatedGame& g, const CostWeights& w) {
  GameSpec s = g.spec();
  s.Q2 = w.Q;
  s.R21 = w.Ru;
  s.R22 = w.Rv;
  return validate_game(std::move(s));
}

inline double rel_err(const MatrixXd& got, const MatrixXd& ref) {
  const double d = (got - ref).norm();
  const double nr = ref.norm();
  return nr > 0.0 ? d / nr : d;
}

}  // namespace rundetail

// Orchestrates one scenario and persists its outputs under out_dir:
//   solve    — model-based P, gains, Pv, M and the alignment check
//   learn    — Algorithms 1-2 against the black-box plant, deltas vs model-based
//   simulate — team / compromised / incentive rollouts with the cost table
//   compare  — learn + simulate side by side
inline RunReport run(const ScenarioConfig& cfg, const std::string& out_dir) {
  const auto t_start = std::chrono::steady_clock::now();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Io("cannot create output directory " + out_dir + ": " + ec.message());
  const auto out_path = [&](const std::string& name) { return (std::filesystem::path(out_dir) / name).string(); };

  const ValidatedGame g = validate_game(cfg.game);
  const Mode mode = cfg.scenario.mode;

  RunReport r;
  r.mode = mode_name(mode);
  r.n = g.n();
  r.m1 = g.m1();
  r.m2 = g.m2();
  r.seed = cfg.learner.seed;
  r.config = cfg;

  const TeamSolution ts = solve_team_optimal(g, cfg.solver);
  r.P = ts.P;
  r.K1 = ts.gains.K1;
  r.K2 = ts.gains.K2;
  r.are_residual = ts.residual;
  r.solver_iterations = ts.iterations;
  r.J1_team_predicted = g.x0().dot(ts.P * g.x0());

  if (mode == Mode::solve || mode == Mode::learn || mode == Mode::compare) {
    const FollowerValue fv = solve_follower_value(g, ts.gains, cfg.solver);
    const MatrixXd M = incentive_matrix(g, ts.gains, fv);
    const MatrixXd K2star = follower_best_response(g, {ts.gains, M}, cfg.solver);
    r.Pv = fv.Pv;
    r.pv_residual = fv.residual;
    r.M = M;
    r.alignment_error = (K2star - ts.gains.K2).norm();
    r.alignment_ok = *r.alignment_error <= 1e-8;
  }

  if (mode == Mode::learn || mode == Mode::compare) {
    const PlantHandle plant = make_plant(g, cfg.learner.seed);
    const LearnResult alg1 =
        algorithm1_team_optimal(plant, leader_weights(g), g.gamma(), cfg.learner, ts.gains);
    const IncentiveLearnResult alg2 =
        algorithm2_incentive(plant, follower_weights(g), g.gamma(), alg1.gains, cfg.learner);
    r.learned_K1 = alg1.gains.K1;
    r.learned_K2 = alg1.gains.K2;
    r.learned_M = alg2.M;
    r.delta_K1 = rundetail::rel_err(alg1.gains.K1, ts.gains.K1);
    r.delta_K2 = rundetail::rel_err(alg1.gains.K2, ts.gains.K2);
    r.delta_M = (alg2.M - *r.M).norm() / (1.0 + r.M->norm());
    r.learn_iterations = alg1.iterations;
    r.incentive_iterations = alg2.iterations;
    write_text_file(out_path("convergence.csv"), convergence_csv(alg1.log));
    write_text_file(out_path("convergence_incentive.csv"), convergence_csv(alg2.log));
    r.files.push_back("convergence.csv");
    r.files.push_back("convergence_incentive.csv");
  }

  if (mode == Mode::simulate || mode == Mode::compare) {
    const CostWeights attacker = cfg.scenario.attacker ? *cfg.scenario.attacker : follower_weights(g);
    const ValidatedGame g_att = rundetail::with_follower_weights(g, attacker);
    const FollowerValue fv_att = solve_follower_value(g_att, ts.gains, cfg.solver);
    const MatrixXd M_att = incentive_matrix(g_att, ts.gains, fv_att);
    const MatrixXd M_zero = MatrixXd::Zero(g.m1(), g.m2());
    const MatrixXd K2_att = follower_best_response(g_att, {ts.gains, M_zero}, cfg.solver);
    const MatrixXd K2_inc = follower_best_response(g_att, {ts.gains, M_att}, cfg.solver);

    const PlantHandle plant = make_plant(g, cfg.learner.seed);
    const int T = cfg.scenario.horizon;
    const Trajectory traj_team =
        rollout(plant, linear_leader(ts.gains.K1), linear_follower(ts.gains.K2), g.x0(), T);
    const Trajectory traj_att =
        rollout(plant, linear_leader(ts.gains.K1), linear_follower(K2_att), g.x0(), T);
    const IncentivePolicy pol{ts.gains, M_att};
    const Trajectory traj_inc = rollout(plant, incentive_leader(pol), linear_follower(K2_inc), g.x0(), T);

    const CostWeights lw = leader_weights(g);
    r.J1_team = evaluate_cost(plant, traj_team, lw, g.gamma(), Tail::lyapunov(ts.gains));
    r.J1_attacked = evaluate_cost(plant, traj_att, lw, g.gamma(), Tail::lyapunov({ts.gains.K1, K2_att}));
    const MatrixXd K1_eff = ts.gains.K1 + M_att * (K2_inc - ts.gains.K2);
    r.J1_incentive = evaluate_cost(plant, traj_inc, lw, g.gamma(), Tail::lyapunov({K1_eff, K2_inc}));
    r.K2_attacked = K2_att;
    r.K2_incentive_response = K2_inc;
    if (!r.Pv) {
      r.Pv = fv_att.Pv;
      r.pv_residual = fv_att.residual;
      r.M = M_att;
      r.alignment_error = (K2_inc - ts.gains.K2).norm();
      r.alignment_ok = *r.alignment_error <= 1e-8;
    }

    write_text_file(out_path("trajectory_team.csv"), trajectory_csv(traj_team, lw, follower_weights(g)));
    write_text_file(out_path("trajectory_attacked.csv"), trajectory_csv(traj_att, lw, attacker));
    write_text_file(out_path("trajectory_incentive.csv"), trajectory_csv(traj_inc, lw, attacker));
    r.files.push_back("trajectory_team.csv");
    r.files.push_back("trajectory_attacked.csv");
    r.files.push_back("trajectory_incentive.csv");
  }

  const auto t_end = std::chrono::steady_clock::now();
  r.wall_clock_seconds = std::chrono::duration<double>(t_end - t_start).count();
  write_text_file(out_path("report.json"), report_to_json(r));
  return r;
}

}  // namespace stackgame

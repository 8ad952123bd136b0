// Command-line front end: solve | learn | simulate | compare over a JSON scenario config.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <stackgame/stackgame.hpp>

namespace {

struct CliOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

void add_common(CLI::App* sub, CliOpts& o) {
  sub->add_option("--config", o.config_path, "scenario config (JSON)")->required();
  sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "override learner seed");
  sub->add_option("--tol", o.tol, "override solver tolerance");
  sub->add_option("--max-iters", o.max_iters, "override solver iteration cap");
}

void print_summary(const stackgame::RunReport& r, const std::string& out_dir) {
  std::printf("mode: %s  (n=%d, m1=%d, m2=%d)\n", r.mode.c_str(), r.n, r.m1, r.m2);
  if (r.are_residual)
    std::printf("  team solve: %d iterations, residual %.3e\n", *r.solver_iterations, *r.are_residual);
  if (r.alignment_error)
    std::printf("  incentive alignment: %s (error %.3e)\n", r.alignment_ok ? "ok" : "FAILED",
                *r.alignment_error);
  if (r.delta_K1)
    std::printf("  learned gains: delta_K1 %.3e, delta_K2 %.3e, delta_M %.3e\n", *r.delta_K1,
                *r.delta_K2, *r.delta_M);
  if (r.J1_team)
    std::printf("  leader cost: team %.9g, attacked %.9g, incentive %.9g\n", *r.J1_team,
                *r.J1_attacked, *r.J1_incentive);
  std::printf("  report: %s/report.json\n", out_dir.c_str());
}

int run_mode(stackgame::Mode mode, const CliOpts& o) {
  stackgame::ScenarioConfig cfg = stackgame::load_config(o.config_path);
  cfg.scenario.mode = mode;
  if (o.seed) cfg.learner.seed = *o.seed;
  if (o.tol) {
    if (*o.tol <= 0.0) throw stackgame::ValidationError("--tol must be positive");
    cfg.solver.tol = *o.tol;
  }
  if (o.max_iters) {
    if (*o.max_iters < 1)
      throw stackgame::ValidationError("--max-iters must be at least 1");
    cfg.solver.max_iters = *o.max_iters;
    cfg.learner.max_policy_iters = *o.max_iters;
  }
  const stackgame::RunReport r = stackgame::run(cfg, o.out_dir);
  print_summary(r, o.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incentive Stackelberg toolkit for discrete-time linear systems"};
  app.require_subcommand(1);

  CliOpts o;
  stackgame::Mode mode = stackgame::Mode::solve;
  auto* solve = app.add_subcommand("solve", "model-based gains, follower value and incentive matrix");
  auto* learn = app.add_subcommand("learn", "model-free Q-learning pipeline against the plant");
  auto* simulate = app.add_subcommand("simulate", "team / compromised / incentive rollouts");
  auto* compare = app.add_subcommand("compare", "learn and simulate in one run");
  for (auto* sub : {solve, learn, simulate, compare}) add_common(sub, o);
  solve->callback([&] { mode = stackgame::Mode::solve; });
  learn->callback([&] { mode = stackgame::Mode::learn; });
  simulate->callback([&] { mode = stackgame::Mode::simulate; });
  compare->callback([&] { mode = stackgame::Mode::compare; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 usage errors exit with codes >= 100
  }

  try {
    return run_mode(mode, o);
  } catch (const stackgame::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  }
}

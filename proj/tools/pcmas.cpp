// pcmas: punishment design, population simulation, teaching experiments.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcmas/experiments.hpp"
#include "pcmas/population.hpp"
#include "pcmas/punishment.hpp"
#include "pcmas/teacher_mdp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pcmas;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 42;
  std::string out;
  bool as_json = false;
};

JointAction parse_law(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--law", "expected i,j (1-based)");
  int i = std::stoi(text.substr(0, comma));
  int j = std::stoi(text.substr(comma + 1));
  if (i < 1 || j < 1)
    throw CLI::ValidationError("--law", "actions are 1-based");
  return {i - 1, j - 1};
}

json strategy_json(const MixedStrategy& strategy) {
  return json(strategy.probs);
}

void emit(const GlobalOptions& global, const std::string& human,
          const json& machine) {
  if (global.as_json)
    std::cout << machine.dump(2) << "\n";
  else
    std::cout << human;
  if (!global.out.empty()) {
    std::ofstream out(global.out);
    if (!out) throw std::runtime_error("cannot write " + global.out);
    out << machine.dump(2) << "\n";
  }
}

void write_rows(const GlobalOptions& global, const std::vector<ResultRow>& rows) {
  if (!global.out.empty()) {
    std::ofstream out(global.out);
    if (!out) throw std::runtime_error("cannot write " + global.out);
    write_csv(out, rows);
    std::cerr << rows.size() << " rows -> " << global.out << "\n";
  } else {
    write_csv(std::cout, rows);
  }
}

TeacherSpec parse_teacher(const std::string& text) {
  TeacherSpec spec;
  if (text == "tft") {
    spec.kind = TeacherSpec::Kind::tft;
  } else if (text == "2tft") {
    spec.kind = TeacherSpec::Kind::two_tft;
  } else if (text == "learner") {
    spec.kind = TeacherSpec::Kind::learner;
  } else if (text == "optimal") {
    spec.kind = TeacherSpec::Kind::policy;
  } else if (text.rfind("fixed:", 0) == 0) {
    spec.kind = TeacherSpec::Kind::fixed;
    std::string action = text.substr(6);
    if (action == "I" || action == "1")
      spec.fixed_action = 0;
    else if (action == "II" || action == "2")
      spec.fixed_action = 1;
    else
      throw CLI::ValidationError("--teacher", "fixed:<I|II>");
  } else if (text.rfind("delayed:", 0) == 0) {
    spec.kind = TeacherSpec::Kind::delayed;
    spec.switch_at = std::stoll(text.substr(8));
    spec.before_action = 1;  // gentle / II
    spec.after_action = 0;   // hard / I
  } else {
    throw CLI::ValidationError(
        "--teacher", "expected tft|2tft|fixed:I|fixed:II|learner|optimal|delayed:K");
  }
  return spec;
}

std::vector<std::shared_ptr<const TeachingPolicy>> load_policies(
    const std::vector<std::string>& files, const std::string& dir) {
  std::vector<std::shared_ptr<const TeachingPolicy>> policies;
  for (const auto& file : files)
    policies.push_back(std::make_shared<const TeachingPolicy>(load_policy(file)));
  if (!dir.empty()) {
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".bin") found.push_back(entry.path());
    std::sort(found.begin(), found.end());
    for (const auto& path : found)
      policies.push_back(std::make_shared<const TeachingPolicy>(load_policy(path)));
  }
  return policies;
}

// --- punish -------------------------------------------------------------

int cmd_punish_plan(const GlobalOptions& global, const std::string& game_file) {
  MatrixGame game = load_matrix_game(game_file);
  PunishmentPlan plan = punishment_plan(game);
  JointAction law = best_social_law(game);
  auto [b, b_prime] = incentive(game, law);

  std::ostringstream human;
  human << "game: " << game.rows() << "x" << game.cols() << " from "
        << game_file << "\n";
  human << "efficient solutions:";
  for (JointAction s : efficient_solutions(game))
    human << " (" << s.i + 1 << "," << s.j + 1 << ")";
  human << "\nbest social law: (" << law.i + 1 << "," << law.j + 1
        << ")  [b+b' = " << b + b_prime << "]\n";
  human << "punishing strategy as player 1:";
  for (double p : plan.punish_as_p1.probs) human << " " << p;
  human << "\npunishing strategy as player 2:";
  for (double p : plan.punish_as_p2.probs) human << " " << p;
  human << "\nv = " << plan.v << ", v' = " << plan.v_prime << "\n";
  human << "deviator payoff ceiling: " << -plan.v << " as player 2, "
        << -plan.v_prime << " as player 1\n";

  json machine{{"game", game_file},
               {"best_social_law", {law.i + 1, law.j + 1}},
               {"punish_as_p1", strategy_json(plan.punish_as_p1)},
               {"punish_as_p2", strategy_json(plan.punish_as_p2)},
               {"v", plan.v},
               {"v_prime", plan.v_prime}};
  emit(global, human.str(), machine);
  return 0;
}

int cmd_punish_deter(const GlobalOptions& global, const std::string& game_file,
                     const std::string& law_text, int n) {
  MatrixGame game = load_matrix_game(game_file);
  JointAction law = parse_law(law_text);
  DeterrenceReport report = deterrence_report(game, law, n);

  std::ostringstream human;
  human << "law (" << law.i + 1 << "," << law.j + 1 << ") among n = " << n
        << " agents\n";
  human << "b = " << report.b << ", b' = " << report.b_prime
        << " (deviation payoffs)\n";
  human << "e = " << report.e << ", e' = " << report.e_prime
        << " (law payoffs)\n";
  human << "v = " << report.v << ", v' = " << report.v_prime
        << " (projected-game values)\n";
  if (report.p_min) {
    human << "p_min = " << *report.p_min << " punishers deter deviation\n";
    human << "expected deviation payoff at p_min: "
          << expected_malicious_payoff(game, law, n, *report.p_min)
          << " (law pays " << (report.e + report.e_prime) / 2 << ")\n";
  } else {
    human << "p_min = impossible: no punisher count deters deviation\n";
  }

  json machine{{"law", {law.i + 1, law.j + 1}},
               {"n", n},
               {"b", report.b},
               {"b_prime", report.b_prime},
               {"e", report.e},
               {"e_prime", report.e_prime},
               {"v", report.v},
               {"v_prime", report.v_prime}};
  if (report.p_min)
    machine["p_min"] = *report.p_min;
  else
    machine["p_min"] = "impossible";
  emit(global, human.str(), machine);
  return 0;
}

// --- popsim -------------------------------------------------------------

int cmd_popsim_run(const GlobalOptions& global, const std::string& config_file,
                   const std::string& trace_file) {
  PopulationConfig config = load_population_config(config_file);

  PopStats stats;
  if (!trace_file.empty()) {
    std::ofstream trace(trace_file);
    if (!trace) throw std::runtime_error("cannot write " + trace_file);
    stats = run_population(config, &trace);
  } else {
    stats = run_population(config);
  }

  // stats go to stdout as JSON; the short summary stays on stderr
  std::ostringstream human;
  human << "n=" << config.n << " p=" << config.p << " c=" << config.c
        << " m=" << config.m << ", " << config.iterations
        << " iterations, seed " << config.seed << "\n";
  auto describe = [&](const char* name, const RoleStats& role) {
    human << name << ": mean payoff " << role.mean_payoff() << " over "
          << role.encounters << " encounters\n";
  };
  describe("punishing ", stats.punishing);
  describe("conforming", stats.conforming);
  describe("malicious ", stats.malicious);
  human << "deviations observed: " << stats.deviations
        << ", punishments executed: " << stats.punishments << "\n";
  std::cerr << human.str();

  std::string machine = pop_stats_to_json(stats);
  std::cout << machine << "\n";
  if (!global.out.empty()) {
    std::ofstream out(global.out);
    if (!out) throw std::runtime_error("cannot write " + global.out);
    out << machine << "\n";
  }
  return 0;
}

// --- tmdp ---------------------------------------------------------------

int cmd_tmdp_solve(const std::string& game_file, std::vector<double> temps,
                   bool temp_grid, int cells, double gamma0, double tol,
                   double alpha, double q_lo, double q_hi,
                   const std::string& out_file, const std::string& out_dir) {
  TeachingGame game = load_teaching_game(game_file);
  if (temp_grid) {
    auto grid_temps = log_temperature_grid();
    temps.insert(temps.end(), grid_temps.begin(), grid_temps.end());
  }
  if (temps.empty())
    throw CLI::ValidationError("--temp", "at least one temperature required");
  if (temps.size() > 1 && out_dir.empty())
    throw CLI::ValidationError("--out-dir",
                               "multiple temperatures need --out-dir");

  QGrid grid{q_lo, q_hi, cells};
  if (q_lo == 0.0 && q_hi == 0.0) {
    grid.q_lo = game.min_student_payoff();
    grid.q_hi = game.max_student_payoff();
  }
  grid.validate();

  for (double T : temps) {
    TmdpModel model = build_tmdp(game, grid, T, alpha);
    PolicySolution sol = value_iteration(model, gamma0, tol);
    TeachingPolicy policy = make_teaching_policy(model, sol);

    fs::path path;
    if (temps.size() == 1 && !out_file.empty()) {
      path = out_file;
    } else {
      char name[64];
      std::snprintf(name, sizeof(name), "policy_T%.6g.bin", T);
      path = fs::path(out_dir.empty() ? "." : out_dir) / name;
      if (!out_dir.empty()) fs::create_directories(out_dir);
    }
    save_policy(path, policy);
    std::cerr << "T=" << T << ": " << sol.residual_history.size()
              << " sweeps, residual " << sol.residual << " -> " << path
              << "\n";
  }
  return 0;
}

// --- teach --------------------------------------------------------------

StudentSpec make_student_spec(const std::string& kind, double alpha,
                              double gamma, int memory) {
  StudentSpec spec;
  if (kind == "bql")
    spec.kind = StudentSpec::Kind::bql;
  else if (kind == "ql")
    spec.kind = StudentSpec::Kind::ql;
  else
    throw CLI::ValidationError("--student", "expected bql|ql");
  spec.alpha = alpha;
  spec.gamma = gamma;
  spec.memory = memory;
  return spec;
}

int cmd_teach_run(const GlobalOptions& global, const std::string& game_file,
                  const std::string& teacher_text, const StudentSpec& student,
                  std::optional<double> temp, bool decay, long long iters,
                  int trials, const std::vector<std::string>& policy_files,
                  const std::string& policy_dir,
                  const std::string& trace_file) {
  TeachingGame game = game_file.empty() ? TeachingGame::prisoners_dilemma()
                                        : load_teaching_game(game_file);
  TeacherSpec teacher = parse_teacher(teacher_text);
  teacher.policies = load_policies(policy_files, policy_dir);

  TemperatureSchedule schedule = decay ? TemperatureSchedule::decay()
                                       : TemperatureSchedule::fixed(
                                             temp.value_or(1.0));
  if (!decay && !temp)
    throw CLI::ValidationError("--temp", "give --temp T or --decay");

  std::vector<double> rates(trials);
  std::string teacher_name;
  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t seed = derive_seed(global.seed, 0, trial);
    auto t = teacher.make(game, schedule, student);
    if (trial == 0) teacher_name = t->name();
    SessionLog log =
        run_session(student.make(), *t, game, iters, schedule, seed);
    rates[trial] = log.rate_of(game.target, 0, log.rounds.size());

    if (trial == 0 && !trace_file.empty()) {
      std::ofstream trace(trace_file);
      if (!trace) throw std::runtime_error("cannot write " + trace_file);
      trace << "iter,student_action,teacher_action,reward\n";
      for (std::size_t k = 0; k < log.rounds.size(); ++k)
        trace << k << ',' << int(log.rounds[k].student) + 1 << ','
              << int(log.rounds[k].teacher) + 1 << ',' << log.rounds[k].reward
              << '\n';
    }
  }
  double mean = 0.0;
  for (double r : rates) mean += r;
  mean /= trials;
  double sd = 0.0;
  if (trials > 1) {
    for (double r : rates) sd += (r - mean) * (r - mean);
    sd = std::sqrt(sd / (trials - 1));
  }

  std::ostringstream human;
  human << "teacher " << teacher_name << " vs "
        << (student.kind == StudentSpec::Kind::bql ? "bql" : "ql")
        << " student, " << iters << " iterations x " << trials << " trials\n";
  human << "mean target-action rate: " << mean << " (sd " << sd << ")\n";

  json machine{{"teacher", teacher_name},
               {"student", student.kind == StudentSpec::Kind::bql ? "bql" : "ql"},
               {"iterations", iters},
               {"trials", trials},
               {"mean_coop_rate", mean},
               {"sd", sd},
               {"seed", global.seed}};
  emit(global, human.str(), machine);
  return 0;
}

int cmd_teach_dif_sweep(const GlobalOptions& global,
                        std::vector<double> gammas, int trials,
                        long long iters) {
  DifSweepOptions options;
  if (!gammas.empty()) options.gammas = std::move(gammas);
  options.trials = trials;
  options.iterations = iters;
  options.base_seed = global.seed;
  write_rows(global, dif_sweep(dif_fixture_matrices(), options));
  return 0;
}

int cmd_teach_blockpush(const GlobalOptions& global,
                        std::vector<long long> ks, bool baseline, int trials,
                        long long iters, double h, double c_factor,
                        std::optional<double> fixed_temp) {
  BlockPushConfig config;
  config.trials = trials;
  config.iterations = iters;
  config.h = h;
  config.c_factor = c_factor;
  config.base_seed = global.seed;
  if (fixed_temp) config.schedule = TemperatureSchedule::fixed(*fixed_temp);
  if (ks.empty())
    for (long long k = 0; k <= iters; k += iters / 10) ks.push_back(k);

  if (fixed_temp)
    std::cerr << "# schedule: fixed T=" << *fixed_temp;
  else
    std::cerr << "# schedule: decay T(0)=" << config.schedule.t0 << " rate="
              << config.schedule.rate << " offset=" << config.schedule.offset;
  std::cerr << ", alpha=" << config.alpha << ", h=" << h
            << ", c=" << c_factor << "\n";

  auto results = blockpush(config, ks, baseline);
  write_rows(global, blockpush_rows(results, config.base_seed, iters));
  return 0;
}

// --- fig ----------------------------------------------------------------

int cmd_fig(const GlobalOptions& global, const std::string& id,
            const std::string& teacher_text, int trials,
            const std::vector<std::string>& policy_files,
            const std::string& policy_dir) {
  if (id == "fig7-dif")
    return cmd_teach_dif_sweep(global, {}, trials > 0 ? trials : 100, 10000);
  if (id == "fig8-blockpush")
    return cmd_teach_blockpush(global, {}, true, trials > 0 ? trials : 50,
                               10000, 1.0, 2.0, std::nullopt);

  ExperimentSpec spec = figure_spec(id);
  spec.base_seed = global.seed;
  if (trials > 0) spec.trials = trials;
  if (!teacher_text.empty()) spec.teacher = parse_teacher(teacher_text);
  spec.teacher.policies = load_policies(policy_files, policy_dir);
  if (!teacher_text.empty()) {
    // tag overridden teachers in the experiment id; the decay-schedule
    // policy executor names itself optimal-decay, marking approximation
    TemperatureSchedule probe_schedule =
        spec.time_series ? spec.schedule
                         : TemperatureSchedule::fixed(spec.temperatures.at(0));
    spec.id += ":" + spec.teacher.make(spec.game, probe_schedule,
                                       spec.student)->name();
  }
  write_rows(global, run_experiment(spec));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially controlled multi-agent systems: punishment design "
               "and embedded teaching"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "base seed for all randomness");
  app.add_option("--out", global.out, "output file (CSV or JSON)");
  app.add_flag("--json", global.as_json, "machine-readable stdout");

  // punish
  auto* punish = app.add_subcommand("punish", "punishing-strategy design");
  punish->require_subcommand(1);
  std::string punish_game;
  auto* plan = punish->add_subcommand("plan", "compute punishing strategies");
  plan->add_option("--game", punish_game, "game JSON file")->required();
  std::string deter_law = "1,1";
  int deter_n = 2;
  auto* deter = punish->add_subcommand("deter", "deterrence thresholds");
  deter->add_option("--game", punish_game, "game JSON file")->required();
  deter->add_option("--law", deter_law, "social law i,j (1-based)")->required();
  deter->add_option("--n", deter_n, "population size")->required();

  // popsim
  auto* popsim = app.add_subcommand("popsim", "population simulation");
  popsim->require_subcommand(1);
  std::string popsim_config, popsim_trace;
  auto* popsim_run = popsim->add_subcommand("run", "run one simulation");
  popsim_run->add_option("--config", popsim_config, "config JSON")->required();
  popsim_run->add_option("--trace", popsim_trace, "per-iteration CSV trace");

  // tmdp
  auto* tmdp = app.add_subcommand("tmdp", "teacher decision process");
  tmdp->require_subcommand(1);
  std::string tmdp_game, tmdp_out, tmdp_out_dir;
  std::vector<double> tmdp_temps;
  bool tmdp_temp_grid = false;
  int tmdp_cells = 200;
  double tmdp_gamma0 = 0.99, tmdp_tol = 1e-6, tmdp_alpha = 0.1;
  double tmdp_qlo = 0.0, tmdp_qhi = 0.0;
  auto* tmdp_solve = tmdp->add_subcommand("solve", "solve a teaching policy");
  tmdp_solve->add_option("--game", tmdp_game, "teaching game JSON")->required();
  tmdp_solve->add_option("--temp", tmdp_temps, "student temperature(s)");
  tmdp_solve->add_flag("--temp-grid", tmdp_temp_grid,
                       "add the standard 12-point log grid 75..0.5");
  tmdp_solve->add_option("--cells", tmdp_cells, "grid cells per axis");
  tmdp_solve->add_option("--gamma0", tmdp_gamma0, "teacher discount");
  tmdp_solve->add_option("--tol", tmdp_tol, "sup-norm tolerance");
  tmdp_solve->add_option("--alpha", tmdp_alpha, "student learning rate");
  tmdp_solve->add_option("--q-lo", tmdp_qlo, "grid lower bound (default: min payoff)");
  tmdp_solve->add_option("--q-hi", tmdp_qhi, "grid upper bound (default: max payoff)");
  tmdp_solve->add_option("--out", tmdp_out, "policy file (single temperature)");
  tmdp_solve->add_option("--out-dir", tmdp_out_dir, "directory for policy files");

  // teach
  auto* teach = app.add_subcommand("teach", "teaching sessions and sweeps");
  teach->require_subcommand(1);
  std::string teach_game, teach_teacher = "tft", teach_student = "bql";
  std::string teach_trace, teach_policy_dir;
  std::vector<std::string> teach_policies;
  double teach_alpha = 0.1, teach_gamma = 0.9;
  int teach_memory = 1, teach_trials = 1;
  long long teach_iters = 10000;
  std::optional<double> teach_temp;
  bool teach_decay = false;
  auto* teach_run = teach->add_subcommand("run", "run teaching sessions");
  teach_run->add_option("--game", teach_game, "teaching game JSON (default: built-in PD)");
  teach_run->add_option("--teacher", teach_teacher,
                        "tft|2tft|fixed:I|fixed:II|learner|optimal|delayed:K");
  teach_run->add_option("--student", teach_student, "bql|ql");
  teach_run->add_option("--alpha", teach_alpha, "learning rate");
  teach_run->add_option("--gamma", teach_gamma, "QL discount");
  teach_run->add_option("--memory", teach_memory, "QL memory");
  teach_run->add_option("--temp", teach_temp, "fixed temperature");
  teach_run->add_flag("--decay", teach_decay, "temperature decay schedule");
  teach_run->add_option("--iters", teach_iters, "iterations per session");
  teach_run->add_option("--trials", teach_trials, "independent sessions");
  teach_run->add_option("--policy", teach_policies, "solved policy file(s)");
  teach_run->add_option("--policy-dir", teach_policy_dir, "directory of policies");
  teach_run->add_option("--trace", teach_trace, "per-iteration CSV for trial 0");

  std::vector<double> dif_gammas;
  int dif_trials = 100;
  long long dif_iters = 10000;
  auto* dif_cmd = teach->add_subcommand("dif-sweep", "mirror-teacher DIF sweep");
  dif_cmd->add_option("--gammas", dif_gammas, "QL discounts (default 0.5 0.7 0.9)");
  dif_cmd->add_option("--trials", dif_trials, "trials per point");
  dif_cmd->add_option("--iters", dif_iters, "iterations per session");

  std::vector<long long> bp_ks;
  bool bp_no_baseline = false;
  int bp_trials = 50;
  long long bp_iters = 10000;
  double bp_h = 1.0, bp_c = 2.0;
  std::optional<double> bp_fixed_temp;
  auto* bp = teach->add_subcommand("blockpush", "delayed-switch block pushing");
  bp->add_option("--k", bp_ks, "switch thresholds (default 0..iters step iters/10)");
  bp->add_flag("--no-baseline", bp_no_baseline, "skip the two-learner baseline");
  bp->add_option("--trials", bp_trials, "trials per K");
  bp->add_option("--iters", bp_iters, "iterations per run");
  bp->add_option("--h-unit", bp_h, "distance unit h");
  bp->add_option("--c-factor", bp_c, "hard-push distance multiplier");
  bp->add_option("--fixed-temp", bp_fixed_temp,
                 "fixed temperature instead of the decay schedule");

  // fig
  auto* fig = app.add_subcommand("fig", "reproduce a full figure sweep");
  std::string fig_id, fig_teacher, fig_policy_dir;
  std::vector<std::string> fig_policies;
  int fig_trials = 0;
  fig->add_option("id", fig_id,
                  "fig2-opt|fig2-twoql|fig3-tft|fig3-2tft|fig4-decay|fig5-ql|"
                  "fig6-ql-decay|fig7-dif|fig8-blockpush")
      ->required();
  fig->add_option("--teacher", fig_teacher, "override the figure's teacher");
  fig->add_option("--trials", fig_trials, "override trials per point");
  fig->add_option("--policy", fig_policies, "solved policy file(s)");
  fig->add_option("--policy-dir", fig_policy_dir, "directory of policies");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_punish_plan(global, punish_game);
    if (deter->parsed())
      return cmd_punish_deter(global, punish_game, deter_law, deter_n);
    if (popsim_run->parsed())
      return cmd_popsim_run(global, popsim_config, popsim_trace);
    if (tmdp_solve->parsed())
      return cmd_tmdp_solve(tmdp_game, tmdp_temps, tmdp_temp_grid, tmdp_cells,
                            tmdp_gamma0, tmdp_tol, tmdp_alpha, tmdp_qlo,
                            tmdp_qhi, tmdp_out, tmdp_out_dir);
    if (teach_run->parsed())
      return cmd_teach_run(
          global, teach_game, teach_teacher,
          make_student_spec(teach_student, teach_alpha, teach_gamma,
                            teach_memory),
          teach_temp, teach_decay, teach_iters, teach_trials, teach_policies,
          teach_policy_dir, teach_trace);
    if (dif_cmd->parsed())
      return cmd_teach_dif_sweep(global, dif_gammas, dif_trials, dif_iters);
    if (bp->parsed())
      return cmd_teach_blockpush(global, bp_ks, !bp_no_baseline, bp_trials,
                                 bp_iters, bp_h, bp_c, bp_fixed_temp);
    if (fig->parsed())
      return cmd_fig(global, fig_id, fig_teacher, fig_trials, fig_policies,
                     fig_policy_dir);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}

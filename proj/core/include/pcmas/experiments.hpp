#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pcmas/teacher_mdp.hpp"
#include "pcmas/teaching.hpp"

namespace pcmas {

/// One aggregated CSV row. The schema is fixed:
/// experiment,x,iterations,mean,sd,trials,seed
struct ResultRow {
  std::string experiment;
  double x = 0.0;
  long long iterations = 0;
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation across trials
  int trials = 0;
  std::uint64_t seed = 0;
};

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct StudentSpec {
  enum class Kind { bql, ql };
  Kind kind = Kind::bql;
  double alpha = 0.1;
  double gamma = 0.9;  ///< QL only
  int memory = 1;      ///< QL only

  Student make() const;
};

struct TeacherSpec {
  enum class Kind { fixed, tft, two_tft, learner, policy, delayed };
  Kind kind = Kind::tft;
  int fixed_action = kCoop;       ///< fixed
  long long switch_at = 0;        ///< delayed
  int before_action = kDefect;    ///< delayed
  int after_action = kCoop;       ///< delayed
  /// Solved policies (one for fixed-temperature runs, a temperature grid
  /// for decay runs).
  std::vector<std::shared_ptr<const TeachingPolicy>> policies;

  std::unique_ptr<Teacher> make(const TeachingGame& game,
                                const TemperatureSchedule& schedule,
                                const StudentSpec& student) const;
};

/// Seeded sweep over temperatures or time, aggregating student
/// action-0 rates over independent trials. Trial seeds derive from
/// (base_seed, x, trial index), so results are a pure function of the
/// spec and parallelism cannot change output bytes.
struct ExperimentSpec {
  std::string id = "custom";
  TeachingGame game = TeachingGame::prisoners_dilemma();
  StudentSpec student;
  TeacherSpec teacher;

  std::vector<double> temperatures;       ///< x-axis for fixed-T sweeps
  TemperatureSchedule schedule =
      TemperatureSchedule::decay();       ///< for time-series runs
  bool time_series = false;               ///< bucket over time instead of sweeping T
  long long bucket = 250;                 ///< time-series window width

  std::vector<long long> iterations{10000};
  int trials = 100;
  std::uint64_t base_seed = 42;
};

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

/// Builds the spec for a named figure reproduction (fig2-opt,
/// fig2-twoql, fig3-tft, fig3-2tft, fig4-decay, fig5-ql, fig6-ql-decay).
/// Policy-driven figures need the solved policies supplied afterwards.
ExperimentSpec figure_spec(const std::string& id);

// --- DIF sweep --------------------------------------------------------

/// The documented fixture set for the DIF sweep: 21 matrices spanning
/// DIF values from about -20 to +30 over the sweep discounts.
std::vector<TeachingGame> dif_fixture_matrices();

struct DifSweepOptions {
  std::vector<double> gammas{0.5, 0.7, 0.9};
  long long iterations = 10000;
  int trials = 100;
  std::uint64_t base_seed = 42;
  double temperature_t0 = 75.0;  ///< decay schedule start
};

/// One row per (matrix, gamma): x is the DIF value, mean the student
/// action-0 rate under a mirroring teacher with temperature decay.
/// Students are QL with memory 1.
std::vector<ResultRow> dif_sweep(const std::vector<TeachingGame>& matrices,
                                 const DifSweepOptions& options);

// --- Block pushing ----------------------------------------------------

struct BlockPushConfig {
  double h = 1.0;         ///< distance unit
  double c_factor = 2.0;  ///< hard-push multiplier
  long long iterations = 10000;
  double alpha = 0.001;
  TemperatureSchedule schedule = TemperatureSchedule::decay();
  int trials = 50;
  std::uint64_t base_seed = 42;
};

struct BlockPushResult {
  long long k = 0;          ///< switch threshold; -1 for the two-BQL baseline
  bool baseline = false;
  double mean_hard = 0.0;   ///< hard pushes by both agents per run
  double sd_hard = 0.0;
  double mean_distance = 0.0;  ///< cumulative c*x*h + (2-x)*h
  double sd_distance = 0.0;
  int trials = 0;
};

/// Delayed-switch teaching sweep over K plus (optionally) the two-BQL
/// baseline, on the block-pushing game.
std::vector<BlockPushResult> blockpush(const BlockPushConfig& config,
                                       const std::vector<long long>& k_values,
                                       bool include_baseline);

/// Blockpush rows under the fixed CSV schema: experiment ids
/// fig8-blockpush (x = K, mean = hard pushes), fig8-blockpush-twoql and
/// fig8-blockpush-distance.
std::vector<ResultRow> blockpush_rows(const std::vector<BlockPushResult>& r,
                                      std::uint64_t seed,
                                      long long iterations);

// --- Monte-Carlo policy value ------------------------------------------

/// Smallest horizon H with gamma0^H * max|u| / (1 - gamma0) < bias.
long long mc_horizon(double gamma0, double bias, double u_max = 1.0);

/// Monte-Carlo estimate of the discounted expected valuation
/// sum_k gamma0^k u(a_k) of the student's actions under any teacher,
/// averaged over `trials` sessions of `horizon` rounds.
double mc_value(const std::function<std::unique_ptr<Teacher>()>& make_teacher,
                const Student& student_prototype, const TeachingGame& game,
                double gamma0, long long horizon, int trials,
                std::uint64_t seed, const TemperatureSchedule& schedule);

}  // namespace pcmas

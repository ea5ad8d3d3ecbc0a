#include "pcmas/teacher_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "pcmas/parallel.hpp"

namespace pcmas {

void QGrid::validate() const {
  if (!(q_lo < q_hi)) throw std::invalid_argument("grid needs q_lo < q_hi");
  if (cells < 2) throw std::invalid_argument("grid needs at least 2 cells per axis");
}

int QGrid::axis_index(double q) const {
  q = std::clamp(q, q_lo, q_hi);
  // Multiply-then-divide keeps exact-arithmetic boundaries exact (e.g.
  // (0 - -13) * 200 / 26 is exactly 100), so boundary points round up as
  // floor() of an exact integer; dividing by a precomputed cell width
  // would put them one ulp low.
  double t = (q - q_lo) * cells / (q_hi - q_lo);
  int index = static_cast<int>(std::floor(t));
  return std::clamp(index, 0, cells - 1);
}

TmdpModel build_tmdp(const TeachingGame& game, const QGrid& grid,
                     double temperature, double alpha) {
  grid.validate();
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature must be positive");

  TmdpModel model;
  model.grid = grid;
  model.temperature = temperature;
  model.alpha = alpha;
  model.u = game.u;
  const int n = grid.num_states();
  model.trans.resize(n);
  model.reward.resize(n);

  parallel_for(n, [&](long long s) {
    auto [q0, q1] = grid.state_center(static_cast<int>(s));
    double rho0 = boltzmann_p0(q0, q1, temperature);
    model.reward[s] = rho0 * game.u[0] + (1.0 - rho0) * game.u[1];

    for (int teacher_action = 0; teacher_action < 2; ++teacher_action) {
      TmdpModel::Transition& t = model.trans[s][teacher_action];
      for (int student_action = 0; student_action < 2; ++student_action) {
        double reward = game.student_payoff(student_action, teacher_action);
        double n0 = q0, n1 = q1;
        if (student_action == 0)
          n0 = (1.0 - alpha) * q0 + alpha * reward;
        else
          n1 = (1.0 - alpha) * q1 + alpha * reward;
        t.succ[student_action] = grid.state_of(n0, n1);
        t.prob[student_action] = student_action == 0 ? rho0 : 1.0 - rho0;
      }
      // merge coinciding successors so each row has at most 2 distinct arcs
      if (t.succ[0] == t.succ[1]) {
        t.prob[0] = 1.0;
        t.prob[1] = 0.0;
      }
    }
  });
  return model;
}

namespace {

// One Jacobi sweep of V(s) = U(s) + gamma0 max_a sum P V; returns the
// sup-norm residual. Writing into a separate array keeps the per-sweep
// gamma0-contraction exact.
double sweep(const TmdpModel& model, double gamma0,
             const std::vector<double>& v, std::vector<double>& out,
             std::vector<std::uint8_t>* policy) {
  const long long n = model.num_states();

  parallel_for(n, [&](long long s) {
    double best = -std::numeric_limits<double>::infinity();
    int best_action = 0;
    for (int a = 0; a < 2; ++a) {
      const TmdpModel::Transition& t = model.trans[s][a];
      double continuation =
          t.prob[0] * v[t.succ[0]] + t.prob[1] * v[t.succ[1]];
      if (continuation > best) {
        best = continuation;
        best_action = a;
      }
      // ties keep the lower action index because a==0 is evaluated first
    }
    out[s] = model.reward[s] + gamma0 * best;
    if (policy) (*policy)[s] = static_cast<std::uint8_t>(best_action);
  });

  double res = 0.0;
  for (long long s = 0; s < n; ++s) res = std::max(res, std::abs(out[s] - v[s]));
  return res;
}

double policy_sweep(const TmdpModel& model, double gamma0,
                    std::span<const std::uint8_t> policy,
                    const std::vector<double>& v, std::vector<double>& out) {
  const long long n = model.num_states();
  parallel_for(n, [&](long long s) {
    const TmdpModel::Transition& t = model.trans[s][policy[s]];
    double continuation = t.prob[0] * v[t.succ[0]] + t.prob[1] * v[t.succ[1]];
    out[s] = model.reward[s] + gamma0 * continuation;
  });
  double res = 0.0;
  for (long long s = 0; s < n; ++s) res = std::max(res, std::abs(out[s] - v[s]));
  return res;
}

}  // namespace

PolicySolution value_iteration(const TmdpModel& model, double gamma0,
                               double tol) {
  if (!(gamma0 >= 0.0 && gamma0 < 1.0))
    throw std::invalid_argument("gamma0 must be in [0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const int n = model.num_states();
  PolicySolution sol;
  sol.gamma0 = gamma0;
  sol.value.assign(n, 0.0);
  sol.policy.assign(n, 0);

  std::vector<double> next(n, 0.0);
  for (;;) {
    double residual = sweep(model, gamma0, sol.value, next, &sol.policy);
    sol.value.swap(next);
    sol.residual_history.push_back(residual);
    sol.residual = residual;
    if (residual < tol) break;
    if (sol.residual_history.size() > 5'000'000)
      throw std::runtime_error("value iteration failed to converge");
  }
  return sol;
}

std::vector<double> evaluate_policy(const TmdpModel& model,
                                    std::span<const std::uint8_t> policy,
                                    double gamma0, double tol) {
  if (!(gamma0 >= 0.0 && gamma0 < 1.0))
    throw std::invalid_argument("gamma0 must be in [0, 1)");
  if (policy.size() != static_cast<std::size_t>(model.num_states()))
    throw std::invalid_argument("policy must cover every state");

  std::vector<double> value(model.num_states(), 0.0);
  std::vector<double> next(model.num_states(), 0.0);
  for (;;) {
    double residual = policy_sweep(model, gamma0, policy, value, next);
    value.swap(next);
    if (residual < tol) break;
  }
  return value;
}

std::pair<double, double> track_student(
    std::pair<double, double> q0, double alpha,
    std::span<const std::pair<int, double>> observed) {
  double q[2] = {q0.first, q0.second};
  for (const auto& [action, reward] : observed) {
    if (action < 0 || action > 1)
      throw std::out_of_range("observed action must be 0 or 1");
    q[action] = (1.0 - alpha) * q[action] + alpha * reward;
  }
  return {q[0], q[1]};
}

TeachingPolicy make_teaching_policy(const TmdpModel& model,
                                    const PolicySolution& solution) {
  return {model.grid, model.temperature, solution.gamma0, model.alpha,
          solution.policy, solution.value};
}

// --- policy file ------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'P', 'C', 'M', 'A', 'S', 'P', 'L', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 8);
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_policy(const std::filesystem::path& path, const TeachingPolicy& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write policy file: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(p.grid.cells));
  put_f64(out, p.grid.q_lo);
  put_f64(out, p.grid.q_hi);
  put_f64(out, p.temperature);
  put_f64(out, p.gamma0);
  put_f64(out, p.alpha);
  out.write(reinterpret_cast<const char*>(p.actions.data()),
            static_cast<std::streamsize>(p.actions.size()));
  for (double v : p.value) put_f64(out, v);
  if (!out) throw std::runtime_error("short write to policy file: " + path.string());
}

TeachingPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open policy file: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a policy file: " + path.string());
  std::uint32_t version = get_u32(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported policy file version");

  TeachingPolicy p;
  p.grid.cells = static_cast<int>(get_u32(in));
  p.grid.q_lo = get_f64(in);
  p.grid.q_hi = get_f64(in);
  p.temperature = get_f64(in);
  p.gamma0 = get_f64(in);
  p.alpha = get_f64(in);
  p.grid.validate();

  std::size_t n = static_cast<std::size_t>(p.grid.num_states());
  p.actions.resize(n);
  in.read(reinterpret_cast<char*>(p.actions.data()),
          static_cast<std::streamsize>(n));
  p.value.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.value[i] = get_f64(in);
  if (!in) throw std::runtime_error("truncated policy file: " + path.string());
  return p;
}

// --- policy execution --------------------------------------------------

PolicyTeacher::PolicyTeacher(std::shared_ptr<const TeachingPolicy> policy)
    : policy_(std::move(policy)) {
  if (!policy_) throw std::invalid_argument("null policy");
}

void PolicyTeacher::begin_session(const Student& student, Rng&) {
  const auto* bql = std::get_if<BqlState>(&student);
  if (!bql)
    throw std::logic_error(
        "policy teacher tracks exponential-average students only; it cannot "
        "track a stateful Q-learner");
  q_ = bql->q;
  alpha_ = bql->alpha;
  tracking_ = true;
}

int PolicyTeacher::act(long long, Rng&) {
  if (!tracking_)
    throw std::logic_error("policy teacher used without a tracked student state");
  return policy_->actions[policy_->grid.state_of(q_[0], q_[1])];
}

void PolicyTeacher::observe(int student_action, int, double student_reward) {
  q_[student_action] =
      (1.0 - alpha_) * q_[student_action] + alpha_ * student_reward;
}

TemperatureGridPolicyTeacher::TemperatureGridPolicyTeacher(
    std::vector<std::shared_ptr<const TeachingPolicy>> policies,
    TemperatureSchedule schedule)
    : policies_(std::move(policies)), schedule_(schedule) {
  if (policies_.empty()) throw std::invalid_argument("empty policy grid");
  std::sort(policies_.begin(), policies_.end(),
            [](const auto& a, const auto& b) {
              return a->temperature < b->temperature;
            });
}

void TemperatureGridPolicyTeacher::begin_session(const Student& student,
                                                 Rng&) {
  const auto* bql = std::get_if<BqlState>(&student);
  if (!bql)
    throw std::logic_error(
        "policy teacher tracks exponential-average students only");
  q_ = bql->q;
  alpha_ = bql->alpha;
  tracking_ = true;
}

int TemperatureGridPolicyTeacher::act(long long n, Rng&) {
  if (!tracking_)
    throw std::logic_error("policy teacher used without a tracked student state");
  double T = temperature_at(schedule_, n);
  // nearest solved temperature in log space
  const TeachingPolicy* best = policies_.front().get();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& p : policies_) {
    double dist = std::abs(std::log(p->temperature) - std::log(T));
    if (dist < best_dist) {
      best_dist = dist;
      best = p.get();
    }
  }
  return best->actions[best->grid.state_of(q_[0], q_[1])];
}

void TemperatureGridPolicyTeacher::observe(int student_action, int,
                                           double student_reward) {
  q_[student_action] =
      (1.0 - alpha_) * q_[student_action] + alpha_ * student_reward;
}

std::vector<double> log_temperature_grid(double hi, double lo, int count) {
  if (count < 2 || !(hi > lo) || !(lo > 0.0))
    throw std::invalid_argument("bad temperature grid");
  std::vector<double> out(count);
  double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int k = 0; k < count; ++k) out[k] = std::exp(std::log(hi) - k * step);
  return out;
}

}  // namespace pcmas

#include "morpho/env.hpp"

#include <cmath>

#include "morpho/errors.hpp"
#include "morpho/rng.hpp"

namespace morpho {
namespace {

constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kTotalMass = kCartMass + kPoleMass;
constexpr double kPoleHalfLength = 0.5;
constexpr double kPoleMassLength = kPoleMass * kPoleHalfLength;
constexpr double kForceMag = 10.0;
constexpr double kDt = 0.02;

}  // namespace

Eigen::VectorXd CartPole::reset(uint64_t seed) {
  Rng rng(seed);
  position_ = rng.uniform(-0.05, 0.05);
  velocity_ = rng.uniform(-0.05, 0.05);
  angle_ = rng.uniform(-0.05, 0.05);
  angular_velocity_ = rng.uniform(-0.05, 0.05);
  steps_ = 0;
  done_ = false;
  return observation();
}

StepResult CartPole::step(int action) {
  if (done_) throw ContractError("step() called on a finished episode");
  if (action != 0 && action != 1)
    throw ContractError("cartpole action must be 0 or 1");

  const double force = action == 1 ? kForceMag : -kForceMag;
  const double cos_t = std::cos(angle_);
  const double sin_t = std::sin(angle_);
  const double temp =
      (force + kPoleMassLength * angular_velocity_ * angular_velocity_ * sin_t) /
      kTotalMass;
  const double angular_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kPoleHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / kTotalMass));
  const double linear_acc =
      temp - kPoleMassLength * angular_acc * cos_t / kTotalMass;

  // Semi-implicit Euler: velocities first, positions with the new velocities.
  velocity_ += kDt * linear_acc;
  position_ += kDt * velocity_;
  angular_velocity_ += kDt * angular_acc;
  angle_ += kDt * angular_velocity_;

  ++steps_;
  StepResult result;
  result.observation = observation();
  result.reward = 1.0;
  result.terminated =
      std::abs(position_) > kPositionLimit || std::abs(angle_) > kAngleLimit;
  result.truncated = steps_ >= kMaxSteps;
  done_ = result.terminated || result.truncated;
  return result;
}

void CartPole::set_state(const Eigen::Vector4d& state) {
  position_ = state[0];
  velocity_ = state[1];
  angle_ = state[2];
  angular_velocity_ = state[3];
  steps_ = 0;
  done_ = false;
}

Eigen::VectorXd CartPole::observation() const {
  Eigen::VectorXd obs(4);
  obs << position_, velocity_, angle_, angular_velocity_;
  return obs;
}

std::unique_ptr<Environment> make_environment(const std::string& name) {
  if (name == "cartpole") return std::make_unique<CartPole>();
  throw ConfigError("unknown environment: " + name);
}

EpisodeResult run_episode(Environment& env, const Rnn& rnn,
                          const IoAssignment& io, uint64_t episode_seed) {
  Eigen::VectorXd obs = env.reset(episode_seed);
  EpisodeResult result;
  while (true) {
    const Eigen::VectorXd activations = rnn.act(io, obs);
    // Argmax with lowest-index tie break.
    int action = 0;
    for (int i = 1; i < activations.size(); ++i)
      if (activations[i] > activations[action]) action = i;
    const StepResult step = env.step(action);
    result.total_reward += step.reward;
    ++result.steps;
    if (step.terminated || step.truncated) return result;
    obs = step.observation;
  }
}

double rollout_mean_reward(Environment& env, const Rnn& rnn,
                           const IoAssignment& io, int n_episodes,
                           uint64_t seed) {
  double total = 0.0;
  for (int i = 0; i < n_episodes; ++i)
    total += run_episode(env, rnn, io, derive_seed(seed, i)).total_reward;
  return total / n_episodes;
}

}  // namespace morpho

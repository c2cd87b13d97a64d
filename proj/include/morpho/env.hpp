#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>

#include "morpho/rnn.hpp"

namespace morpho {

struct StepResult {
  Eigen::VectorXd observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

struct EpisodeResult {
  double total_reward = 0.0;
  int steps = 0;
};

// Episodic control environment with a discrete action set. Instances are
// single-owner mutable state; create one per concurrent rollout.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual int observation_dim() const = 0;
  virtual int action_count() const = 0;
  virtual Eigen::VectorXd reset(uint64_t seed) = 0;
  virtual StepResult step(int action) = 0;
};

// Pole balancing on a moving cart. State is (position, velocity, angle,
// angular velocity); actions push left (0) or right (1) with 10 N. The
// episode ends when |position| > 2.4 m or |angle| > ~12 degrees, and
// truncates after 500 steps; reward is 1 per step. Dynamics integrate with a
// semi-implicit Euler step (dt = 0.02 s).
class CartPole final : public Environment {
 public:
  static constexpr int kObservationDim = 4;
  static constexpr int kActionCount = 2;
  static constexpr int kMaxSteps = 500;
  static constexpr double kPositionLimit = 2.4;
  static constexpr double kAngleLimit = 0.20943951023931953;  // 12 deg in rad

  int observation_dim() const override { return kObservationDim; }
  int action_count() const override { return kActionCount; }

  // Draws all four state components uniformly from [-0.05, 0.05].
  Eigen::VectorXd reset(uint64_t seed) override;

  // Throws ContractError when called on a finished episode.
  StepResult step(int action) override;

  // Pins the physical state (position, velocity, angle, angular velocity)
  // and restarts the step counter; used for scripted replays.
  void set_state(const Eigen::Vector4d& state);

  bool done() const { return done_; }

 private:
  Eigen::VectorXd observation() const;

  double position_ = 0.0;
  double velocity_ = 0.0;
  double angle_ = 0.0;
  double angular_velocity_ = 0.0;
  int steps_ = 0;
  bool done_ = true;
};

// Factory keyed by the environment name used in experiment configs.
// Throws ConfigError for unknown names.
std::unique_ptr<Environment> make_environment(const std::string& name);

// Runs one episode with the network as controller: each environment step
// injects the observation, propagates, and takes the argmax action (ties
// pick the lowest index).
EpisodeResult run_episode(Environment& env, const Rnn& rnn,
                          const IoAssignment& io, uint64_t episode_seed);

// Mean episode reward over n_episodes; episode seeds derive from the rollout
// seed so the whole evaluation replays exactly.
double rollout_mean_reward(Environment& env, const Rnn& rnn,
                           const IoAssignment& io, int n_episodes,
                           uint64_t seed);

}  // namespace morpho

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dtcns/config.hpp"
#include "dtcns/policy_file.hpp"
#include "dtcns/td3.hpp"

namespace dtcns {

/// What to train. Cooperative training runs an all-cooperative network in
/// which every node acts through the shared actor and receives the shared
/// reward. Egocentric training runs one learner among cooperative nodes that
/// follow the frozen `cooperative_actor`.
struct TrainingScenario {
  SimConfig sim;
  PolicyKind kind = PolicyKind::Cooperative;
  std::optional<DenseNet> cooperative_actor;
  NodeId learner = 0;
};

struct TrainingCurveRow {
  int episode = 0;
  long env_steps = 0;
  double mean_return = 0.0;  // undiscounted, unscaled episode return
  double critic_loss = 0.0;  // mean over the episode's updates
  double actor_loss = 0.0;   // mean over the episode's actor updates
};

struct TrainingResult {
  PolicyFile policy;
  std::vector<TrainingCurveRow> curve;
};

using TrainingProgress = std::function<void(const TrainingCurveRow&)>;

/// One environment step per decision epoch; one TD3 update per environment
/// step once the buffer holds batch_size transitions. Deterministic in `seed`.
TrainingResult train(const TrainingScenario& scenario, const Td3Config& cfg, std::uint64_t seed,
                     const TrainingProgress& progress = {});

inline constexpr const char* kCurveColumns = "episode,env_steps,mean_return,critic_loss,actor_loss";
void write_curve_csv(std::ostream& out, const std::vector<TrainingCurveRow>& curve);

}  // namespace dtcns

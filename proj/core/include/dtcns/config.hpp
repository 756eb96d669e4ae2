#pragma once

#include <string>
#include <string_view>

namespace dtcns {

enum class Style { Cooperative, Egocentric, Ignorant };

std::string_view to_string(Style style);
/// Accepts "cooperative"/"cop", "egocentric"/"ego", "ignorant"/"ign".
Style parse_style(std::string_view text);

/// Number of node features: health flag and one static numeric trait.
inline constexpr int kNumFeatures = 2;
inline constexpr int kHealthFeature = 0;
inline constexpr int kTraitFeature = 1;

/// Global simulation parameters. Defaults reproduce the reference set-up:
/// 30 nodes, 100-day episodes, 0.8-hour ticks, intensity base 0.25 and
/// scale 0.125, transmissibility 0.10, recovery after 5 days.
struct SimConfig {
  int num_nodes = 30;
  int episode_days = 100;
  int ticks_per_day = 30;
  int bond_window_ticks = 1;

  // Score thresholds on the normalized [0,1] score scale, one per style.
  double threshold_cooperative = 0.20;
  double threshold_egocentric = 0.20;
  double threshold_ignorant = 0.20;

  double eta = 2.0;
  double b = 0.25;
  double alpha = 0.125;
  double delta = 0.5;
  double noise_sigma = 0.01;
  double ignorant_constant = 0.0;
  int rl_epoch_ticks = 30;

  // 1.0 = full mixing: every ordered pair meets on every tick.
  double encounter_probability = 1.0;

  double transmissibility = 0.10;
  double recovery_days = 5.0;
  // Off: recovered nodes return to susceptible. On: they stay immune.
  bool permanent_recovery = false;

  // Action entries with magnitude below this decode to a neutral preference.
  double deadzone = 1.0 / 3.0;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  int episode_ticks() const { return episode_days * ticks_per_day; }
  int recovery_ticks() const;
  double threshold_for(Style style) const;
  bool operator==(const SimConfig&) const = default;
};

}  // namespace dtcns

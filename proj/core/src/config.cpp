#include "dtcns/config.hpp"

#include <cmath>
#include <string>

#include "dtcns/errors.hpp"

namespace dtcns {

std::string_view to_string(Style style) {
  switch (style) {
    case Style::Cooperative: return "cooperative";
    case Style::Egocentric: return "egocentric";
    case Style::Ignorant: return "ignorant";
  }
  return "unknown";
}

Style parse_style(std::string_view text) {
  if (text == "cooperative" || text == "cop") return Style::Cooperative;
  if (text == "egocentric" || text == "ego") return Style::Egocentric;
  if (text == "ignorant" || text == "ign") return Style::Ignorant;
  throw ConfigError("unknown style '" + std::string(text) +
                    "' (expected cop, ego or ign)");
}

namespace {

void check(bool ok, const char* field, const char* rule) {
  if (!ok) throw ConfigError(std::string("invalid config: ") + field + " " + rule);
}

bool unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void SimConfig::validate() const {
  check(num_nodes > 0, "num_nodes", "must be positive");
  check(episode_days > 0, "episode_days", "must be positive");
  check(ticks_per_day > 0, "ticks_per_day", "must be positive");
  check(bond_window_ticks >= 1, "bond_window_ticks", "must be >= 1");
  check(threshold_cooperative >= 0.0, "threshold_cooperative", "must be >= 0");
  check(threshold_egocentric >= 0.0, "threshold_egocentric", "must be >= 0");
  check(threshold_ignorant >= 0.0, "threshold_ignorant", "must be >= 0");
  check(eta > 1.0, "eta", "must be > 1");
  check(b > 0.0, "b", "must be > 0");
  check(alpha > 0.0, "alpha", "must be > 0");
  check(delta > 0.0 && delta < 1.0, "delta", "must lie in (0,1)");
  check(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "noise_sigma", "must be >= 0");
  check(std::isfinite(ignorant_constant), "ignorant_constant", "must be finite");
  check(rl_epoch_ticks > 0, "rl_epoch_ticks", "must be positive");
  check(unit(encounter_probability), "encounter_probability", "must lie in [0,1]");
  check(unit(transmissibility), "transmissibility", "must lie in [0,1]");
  check(recovery_days > 0.0 && recovery_days <= 365.0, "recovery_days",
        "must lie in (0,365]");
  check(deadzone >= 0.0 && deadzone < 1.0, "deadzone", "must lie in [0,1)");
  check(recovery_ticks() >= 1, "recovery_days", "must span at least one tick");
}

int SimConfig::recovery_ticks() const {
  return static_cast<int>(std::lround(recovery_days * ticks_per_day));
}

double SimConfig::threshold_for(Style style) const {
  switch (style) {
    case Style::Cooperative: return threshold_cooperative;
    case Style::Egocentric: return threshold_egocentric;
    case Style::Ignorant: return threshold_ignorant;
  }
  return threshold_cooperative;
}

}  // namespace dtcns

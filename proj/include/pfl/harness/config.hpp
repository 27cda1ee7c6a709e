#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pfl/federation/experiment.hpp"

namespace pfl::harness {

struct HarnessOptions {
  federation::ExperimentConfig experiment;
  // Non-empty: run the sweep over these client counts.
  std::vector<std::size_t> sweep_clients;
  // Mechanisms for the sweep; empty means the configured mechanism only.
  std::vector<privacy::MechanismKind> sweep_mechanisms;
  // Set when --help was given; nothing else is meaningful then.
  std::string help_text;
};

// Flags override a --config file (flat key=value lines, keys named like the
// long flags without dashes), which overrides the defaults. Throws
// ConfigError on unknown keys, malformed values or any invariant violation;
// the message lists every violation found.
HarnessOptions parse_config(const std::vector<std::string>& args);
HarnessOptions parse_config(int argc, const char* const* argv);

// The resolved configuration as key=value lines, loadable with --config.
std::string describe(const HarnessOptions& options);

}  // namespace pfl::harness

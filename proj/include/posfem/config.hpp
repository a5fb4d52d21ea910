#pragma once

#include <stdexcept>
#include <string>

#include "posfem/experiments.hpp"

namespace posfem {

/// Bad or inadmissible configuration; key() names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Parse the `key = value` text format with [mesh], [time], [physics],
/// [scheme], [constraints], [case] and [output] sections. '#' and ';' start
/// comments. Unknown sections or keys are rejected; [mesh] and [time] are
/// required. The result is validated.
ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config(const std::string& path);

/// Inverse of parse_config: every field written, doubles in their shortest
/// round-trip form so parse_config(serialize_config(s)) reproduces s exactly.
std::string serialize_config(const ExperimentSpec& spec);

}  // namespace posfem

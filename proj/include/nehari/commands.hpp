#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace nehari {

/// Exit-code contract shared by all commands:
/// 0 success, 1 configuration error, 2 solver non-convergence,
/// 3 regime guard (hypotheses of the requested experiment fail).
int cmd_solve(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override);
int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override);
int cmd_constants(const std::string& config_path);
int cmd_radial(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override);

}  // namespace nehari

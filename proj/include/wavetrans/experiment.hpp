#pragma once

#include <cstdint>
#include <string>

#include "wavetrans/types.hpp"

namespace wavetrans {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the task described by the JSON config file (or a figure reproduction
/// when figure_id is nonempty). Returns a process exit code:
/// 0 success, 2 config/usage error, 3 numeric failure.
int run_experiment(const std::string& config_path, const std::string& out_dir_override,
                   long long seed_override, const std::string& figure_id);

/// Same entry point on an in-memory JSON document (used by the C API).
int run_experiment_json(const std::string& config_json, const std::string& out_dir_override,
                        long long seed_override, const std::string& figure_id,
                        std::string* error_message);

}  // namespace wavetrans

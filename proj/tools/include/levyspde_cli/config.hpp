#pragma once

#include "levyspde/study.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace levyspde::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kSchemaVersion = 1;
constexpr const char* kOutputDirEnv = "LEVYSPDE_OUTPUT_DIR";

StudyConfig parse_study_config(const std::string& json_text);
StudyConfig load_study_config(const std::filesystem::path& path);

// Relative outputs go to `out_dir`, else $LEVYSPDE_OUTPUT_DIR, else the working directory.
std::filesystem::path resolve_output(const StudyConfig& config, const std::string& out_dir);

}  // namespace levyspde::cli

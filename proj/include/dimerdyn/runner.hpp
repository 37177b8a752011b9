// runner.hpp — CLI commands: config resolution, sweeps, CSV and manifest output

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dimerdyn/config.hpp"

namespace dimerdyn {

struct RunOptions {
    std::string command;   // rates | dynamics | decoherence | figures | validate | oracle
    std::optional<std::filesystem::path> config_path;
    std::filesystem::path out_dir{"."};
    std::optional<std::string> preset;
    std::optional<std::uint64_t> seed;
    unsigned threads{1};
    std::optional<Config> inline_config;   // merged after the file
};

struct RunResult {
    std::vector<std::filesystem::path> files;   // written, manifest last
    std::vector<std::string> messages;
    Config resolved;
};

// Resolution order: preset < config file < inline config < --seed.
// Every output directory receives manifest.cfg, a config that reruns the
// same command to byte-identical CSVs. Nothing is written if the run fails.
RunResult run(const RunOptions& opt);

const std::vector<std::string>& commands();
const std::vector<std::string>& preset_names();
std::string preset_text(const std::string& name);

// Presets each command accepts.
bool command_accepts_preset(const std::string& command, const std::string& preset);

} // namespace dimerdyn

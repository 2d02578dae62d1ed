#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "facejet/config.hpp"

namespace facejet {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitIncompatible = 4,
};

/// Flags that override or complement the config file.
struct CommandOptions {
  std::optional<std::filesystem::path> probe;
  std::optional<std::filesystem::path> out;
  std::optional<ConvolutionStrategy> strategy;
  std::optional<std::uint64_t> seed;
  bool raw_coefficients = false;
};

/// Writes the points file (and the J-map when configured); prints N and q.
void cmd_select(const RunConfig& config, const CommandOptions& options, std::ostream& out);
/// Enrolls every dataset subject at the stored points and writes the gallery.
void cmd_enroll(const RunConfig& config, const CommandOptions& options, std::ostream& out);
/// Prints "rank subject_id score" for a single probe.
void cmd_identify(const RunConfig& config, const CommandOptions& options, std::ostream& out);
/// Writes the JSON evaluation report.
void cmd_evaluate(const RunConfig& config, const CommandOptions& options, std::ostream& out);
/// Applies the perturbation suite to the probe set and writes PGM images.
void cmd_perturb(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Loads the config, runs `command`, and maps errors to exit codes.
/// Diagnostics go to `err`.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace facejet

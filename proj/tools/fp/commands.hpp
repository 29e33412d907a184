#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace fp {

/// One output file: its name inside the output directory and its full text.
struct Artifact {
    std::string name;
    std::string content;
};

/// Runs the command and renders every artifact in memory; nothing touches the
/// file system, so a failure leaves no partial output.
[[nodiscard]] std::vector<Artifact> run_command(const ExperimentConfig& config);

/// Writes each artifact to a temporary file beside its target and renames it
/// into place.
void write_artifacts(const std::filesystem::path& dir, const std::vector<Artifact>& artifacts);

/// %.17g, with NaN and infinities spelled nan, inf, -inf.
[[nodiscard]] std::string format_real(double v);

} // namespace fp

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fpade/asymptotics.hpp>
#include <fpade/equilibrium.hpp>
#include <fpade/fixed_point.hpp>
#include <fpade/measures.hpp>
#include <fpade/multipoint_pade.hpp>

namespace fp {

enum class Command { orthopoly, linear, nonlinear, equilibrium, zeros, rates };

[[nodiscard]] const char* to_string(Command c) noexcept;
[[nodiscard]] std::optional<Command> parse_command(std::string_view name) noexcept;

struct SolverBlock {
    std::optional<double> tol;
    double damping = 1.0;
    int max_iter = 200;
};

struct EquilibriumBlock {
    fpade::InteractionKind kind = fpade::InteractionKind::C1;
    std::vector<double> ray;
    std::size_t grid_size = 400;
    double tol = 1e-3;
};

struct ScheduleBlock {
    std::vector<double> ray;
    std::vector<int> sizes;
    fpade::ApproximantKind kind = fpade::ApproximantKind::linear;
};

struct OrthopolyBlock {
    /// 0 selects sigma0, j >= 1 selects sigma_j.
    std::size_t measure = 0;
    int degree = 0;
};

/// Validated experiment description. Only the blocks the command needs are set.
struct ExperimentConfig {
    Command command = Command::linear;
    std::optional<fpade::AngelescoSystem> system;
    std::optional<fpade::MultiIndex> multi_index;
    std::optional<OrthopolyBlock> orthopoly;
    SolverBlock solver;
    std::optional<EquilibriumBlock> equilibrium;
    std::optional<ScheduleBlock> schedule;
    std::vector<fpade::Complex> test_points;
};

/// Parses and validates a JSON document for the given command. Every schema
/// violation is collected (with its JSON path) into one validation error;
/// malformed JSON is reported with line and column.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text, Command command);

/// Command-line overrides of scalar settings.
struct Overrides {
    std::optional<double> tol;
    std::optional<std::size_t> grid_size;
    std::optional<double> damping;
    std::optional<int> max_iter;
};

/// Applies the overrides and re-validates the affected values.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Fixed-point options of the config for the given kind.
[[nodiscard]] fpade::FixedPointOptions solver_options(const ExperimentConfig& config, fpade::ApproximantKind kind);

} // namespace fp

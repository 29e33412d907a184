#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fpade/error.hpp>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "json.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int report(const std::string& kind, const std::string& message, const std::vector<std::string>& details)
{
    nlohmann::json j = {{"error", kind}, {"message", message}, {"details", details}};
    std::cerr << j.dump() << '\n';
    return kind == "validation" || kind == "domain" ? kExitValidation : kExitNumerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier-Pade approximants for Angelesco systems"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir = ".";
    fp::Overrides overrides;
    double tol = 0.0, damping = 0.0;
    std::size_t grid_size = 0;
    int max_iter = 0;

    const std::vector<std::pair<fp::Command, std::string>> commands = {
        {fp::Command::orthopoly, "Recurrence coefficients and zeros of an orthonormal family"},
        {fp::Command::linear, "Linear Fourier-Pade approximant for a multi-index"},
        {fp::Command::nonlinear, "Non-linear Fourier-Pade approximant for a multi-index"},
        {fp::Command::equilibrium, "Discrete vector equilibrium problem"},
        {fp::Command::zeros, "Zero distribution along a ray against the equilibrium measures"},
        {fp::Command::rates, "Error rates along a ray against the predicted rate functions"},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> tol_opts, grid_opts, damping_opts, iter_opts;
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(fp::to_string(cmd), help);
        sub->add_option("--config", config_path, "Path to the JSON experiment config")->required();
        sub->add_option("--out", out_dir, "Output directory (created when missing)");
        tol_opts.push_back(sub->add_option("--tol", tol, "Override the solver tolerance"));
        grid_opts.push_back(sub->add_option("--grid-size", grid_size, "Override the equilibrium grid size"));
        damping_opts.push_back(sub->add_option("--damping", damping, "Override the fixed-point damping"));
        iter_opts.push_back(sub->add_option("--max-iter", max_iter, "Override the iteration budget"));
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("validation", e.what(), {});
    }

    std::size_t which = 0;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) which = i;
    const fp::Command command = commands[which].first;
    if (tol_opts[which]->count()) overrides.tol = tol;
    if (grid_opts[which]->count()) overrides.grid_size = grid_size;
    if (damping_opts[which]->count()) overrides.damping = damping;
    if (iter_opts[which]->count()) overrides.max_iter = max_iter;

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) return report("validation", "cannot read config file " + config_path, {});
        std::ostringstream text;
        text << in.rdbuf();
        fp::ExperimentConfig cfg = fp::parse_config(text.str(), command);
        fp::apply_overrides(cfg, overrides);
        const auto artifacts = fp::run_command(cfg);
        fp::write_artifacts(out_dir, artifacts);
        for (const auto& a : artifacts) std::cout << (std::filesystem::path(out_dir) / a.name).string() << '\n';
        return 0;
    } catch (const fpade::Error& e) {
        std::vector<std::string> details = e.details();
        if (!e.trace().empty()) {
            std::string t = "trace:";
            for (double v : e.trace()) t += " " + fp::format_real(v);
            details.push_back(t);
        }
        return report(fpade::to_string(e.kind()), e.what(), details);
    } catch (const std::exception& e) {
        return report("internal", e.what(), {});
    }
}

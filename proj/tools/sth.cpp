// sth: save-then-transmit outage analysis from the command line.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "sth/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Outage analysis for save-then-transmit energy-harvesting links", "sth"};
    app.set_version_flag("--version", STH_VERSION);

    sth::Invocation inv;
    std::string format;
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int n_max = 0;
    std::string mode;

    app.add_option("command", inv.command, "outage | optimize | sweep | diversity | network | simulate | validate")
        ->required()
        ->check(CLI::IsMember(sth::command_names()));
    app.add_option("scenario", inv.scenario_path, "Scenario file")->required();
    app.add_option("--out,-o", inv.out, "Write output to PATH instead of stdout");
    auto* fmt = app.add_option("--format,-f", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo frames");
    app.add_option("--axis", inv.axes, "Sweep axis NAME=start:stop:steps (eta, pc, rho, snr in dB)")
        ->allow_extra_args(false);
    auto* rho_opt = app.add_option("--rho", rho, "Fixed save-ratio");
    auto* nmax_opt = app.add_option("--n-max", n_max, "Largest transmitter count for 'network'");
    auto* mode_opt = app.add_option("--mode", mode, "independent | common | both")
                         ->check(CLI::IsMember({"independent", "common", "both"}));
    app.add_option("--jobs,-j", inv.jobs, "Worker threads (0 = all cores)");
    app.add_flag("--timestamp", inv.timestamp, "Record the wall-clock time in the metadata");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return sth::exit_usage;
    }

    if (*fmt) inv.format = format == "csv" ? sth::OutputFormat::csv : sth::OutputFormat::json;
    if (*seed_opt) inv.seed = seed;
    if (*trials_opt) inv.trials = trials;
    if (*rho_opt) inv.rho = rho;
    if (*nmax_opt) inv.n_max = n_max;
    if (*mode_opt) inv.mode = mode;

    return sth::run(inv, std::cout, std::cerr);
}

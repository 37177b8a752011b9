// dimerdyn.cpp — command-line front end

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dimerdyn/error.hpp"
#include "dimerdyn/runner.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kConvergence = 3, kRegime = 4 };

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Relaxation and decoherence of a donor-acceptor dimer in harmonic reservoirs"};
    app.set_version_flag("--version", DIMERDYN_VERSION);
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", preset;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool list_presets = false;

    for (const auto& name : dimerdyn::commands()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " command");
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--preset", preset, "named preset (fig1a..fig6)");
        sub->add_option("--seed", seed, "random seed (oracle)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--list-presets", list_presets, "print the presets this command accepts");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommand(command);

    if (list_presets) {
        for (const auto& p : dimerdyn::preset_names())
            if (dimerdyn::command_accepts_preset(command, p))
                std::cout << p << "\n";
        return kOk;
    }

    dimerdyn::RunOptions opt;
    opt.command = command;
    opt.out_dir = out_dir;
    opt.threads = threads;
    if (!config_path.empty())
        opt.config_path = config_path;
    if (!preset.empty())
        opt.preset = preset;
    if (sub->count("--seed") > 0)
        opt.seed = seed;
    if (!opt.config_path && !opt.preset && command != "oracle") {
        std::cerr << "dimerdyn " << command << ": need --config or --preset\n";
        return kConfig;
    }

    try {
        const auto result = dimerdyn::run(opt);
        for (const auto& m : result.messages)
            std::cout << m << (m.empty() || m.back() != '\n' ? "\n" : "");
        for (const auto& f : result.files)
            std::cout << "wrote " << f.string() << "\n";
        return kOk;
    } catch (const dimerdyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const dimerdyn::DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kConfig;
    } catch (const dimerdyn::ConvergenceError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return kConvergence;
    } catch (const dimerdyn::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return kRegime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Copyright 2026 The dynpec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dynpec command-line tool: learn, validate, mitigate, ptm, decompose.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "commands.h"
#include "dynpec/error.h"

namespace {

using nlohmann::json;

int fail(const char *kind, const std::string &message, int code) {
    json err = {{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << err.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    using namespace dynpec::cli;
    CLI::App app{"Probabilistic error cancellation for dynamic circuits"};
    app.require_subcommand(1);
    app.fallthrough();

    Options options;
    std::string config_path, out_dir = ".";
    uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config file")->required();
    auto *seed_opt = app.add_option("--seed", seed, "Seed; overrides the config's seed");
    app.add_option("--workers", options.workers, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();

    using Command = json (*)(const Config &, const Options &);
    const std::pair<const char *, Command> commands[] = {
        {"learn", run_learn},
        {"validate", run_validate},
        {"mitigate", run_mitigate},
        {"ptm", run_ptm},
        {"decompose", run_decompose},
    };
    const char *help[] = {
        "Learn sparse Pauli-Lindblad models of PEC layers",
        "Benchmark a layer with and without a learned inverse",
        "Estimate observables with full, unitary-only and raw mitigation",
        "Write the Pauli transfer matrix of a small circuit",
        "Replace a classically controlled CNOT by Clifford feedforward",
    };
    for (size_t i = 0; i < std::size(commands); i++) app.add_subcommand(commands[i].first, help[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail("config", e.what(), 2);
    }
    if (*seed_opt) options.seed = seed;
    options.config = config_path;
    options.out = out_dir;

    try {
        Command run = nullptr;
        for (const auto &[name, fn] : commands) {
            if (app.got_subcommand(name)) run = fn;
        }
        Config config = Config::load(options.config);
        prepare_out_dir(options.out);
        std::cout << run(config, options).dump(2) << std::endl;
    } catch (const dynpec::ConfigError &e) {
        return fail("config", e.what(), 2);
    } catch (const nlohmann::json::exception &e) {
        return fail("config", e.what(), 2);
    } catch (const dynpec::BudgetError &e) {
        return fail("budget", e.what(), 3);
    } catch (const dynpec::NumericalError &e) {
        return fail("numerical", e.what(), 4);
    } catch (const std::exception &e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}

// Copyright 2026 The dqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dqed/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dqed: damped dispersive atom-field dynamics from a scenario file"};

    std::string scenario_path;
    std::string out_dir = "./out";
    std::optional<int> truncation;
    std::string method;
    bool quiet = false;

    app.add_option("--scenario", scenario_path, "Path to the scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (created if missing)");
    app.add_option("--truncation", truncation, "Override the scenario's n_max");
    app.add_option("--method", method, "Override the scenario's method")
        ->check(CLI::IsMember({"analytic", "oracle", "both"}));
    app.add_flag("--quiet", quiet, "Suppress progress output and warnings");

    CLI11_PARSE(app, argc, argv);

    dqed::RunOptions opt;
    opt.scenario_path = scenario_path;
    opt.out_dir = out_dir;
    opt.truncation_override = truncation;
    if (!method.empty()) opt.method_override = dqed::parse_method(method, "--method");
    opt.quiet = quiet;
    return dqed::run_scenario(opt);
}

// Copyright 2026 The beaconclust Authors.
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

#pragma once

#include <CLI11.hpp>

namespace beaconclust::cli {

// Each register_* call adds one subcommand to `app` and binds its handler.
void register_gen(CLI::App& app);
void register_ingest(CLI::App& app);
void register_train(CLI::App& app);
void register_plsa_train(CLI::App& app);
void register_kmeans(CLI::App& app);
void register_assign(CLI::App& app);
void register_eval(CLI::App& app);
void register_report(CLI::App& app);

}  // namespace beaconclust::cli

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

#include <iostream>

#include "beaconclust/error.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cluster users by their beacon histories with a modified pLSA model"};
  app.require_subcommand(1);
  beaconclust::cli::register_gen(app);
  beaconclust::cli::register_ingest(app);
  beaconclust::cli::register_train(app);
  beaconclust::cli::register_plsa_train(app);
  beaconclust::cli::register_kmeans(app);
  beaconclust::cli::register_assign(app);
  beaconclust::cli::register_eval(app);
  beaconclust::cli::register_report(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const beaconclust::Error& e) {
    std::cerr << "beaconclust: error [" << beaconclust::to_string(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "beaconclust: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

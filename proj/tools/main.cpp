// SPDX-License-Identifier: Apache-2.0
//
// cluskit: feed-weight optimization and MIMO evaluation for antenna clusters

#include "cluskit/reports.hpp"

int main(int argc, char** argv) { return cluskit::run_cli(argc, argv); }

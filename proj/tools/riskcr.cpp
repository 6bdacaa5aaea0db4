// SPDX-License-Identifier: Apache-2.0
#include "riskcr/cli.hpp"

int main(int argc, char** argv) { return riskcr::cli_main(argc, argv); }

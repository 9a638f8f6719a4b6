// Copyright (c) aimc contributors.
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "aimc/cli.hpp"

int main(int argc, char** argv) { return aimc::cli::dispatch(argc, argv, std::cout, std::cerr); }

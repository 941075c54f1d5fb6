// Copyright 2026 The bitrade Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
  return bitrade::cli::run(argc, argv, std::cout, std::cerr);
}

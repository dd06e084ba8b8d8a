// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "linf/cli.hpp"

int main(int argc, char **argv)
{
  return linf::run_cli(argc, argv, std::cout, std::cerr);
}

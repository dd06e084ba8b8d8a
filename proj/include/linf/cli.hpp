// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>

namespace linf
{

// Exit codes: 0 success, 2 when the solver stopped at r_max, 1 on errors.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace linf

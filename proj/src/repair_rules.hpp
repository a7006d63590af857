// Internal: built-in repair rules, one per kind.
#pragma once

#include "sqlsmell/repair.hpp"

#include <vector>

namespace sqlsmell::detail {

std::vector<RepairRule> builtin_repair_rules();

}  // namespace sqlsmell::detail

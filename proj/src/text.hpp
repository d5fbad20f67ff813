#pragma once

#include <vector>

#include "scan.hpp"
#include "thompson/element.hpp"

namespace thompson::detail {

// "{a,b,...}" kept in the order written.
std::vector<Address> parse_address_list(Scanner& in, int arity);
// Reads one `V n : ... perm [...]` block, leaving the cursor after it.
TreePair parse_tree_pair(Scanner& in);
std::string address_list(const std::vector<Address>& list);

}  // namespace thompson::detail

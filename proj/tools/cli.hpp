#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thompson::cli {

// Exit codes: 0 success or certificate, 1 input error or failed check,
// 2 undecided or exhausted.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace thompson::cli

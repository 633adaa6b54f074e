#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace padicrmt::cli {

// Exit codes: 0 all verdicts PASS, 1 some verdict is not PASS, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace padicrmt::cli

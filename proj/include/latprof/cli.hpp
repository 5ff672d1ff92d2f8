#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latprof {

// Parses argv (without the program name), dispatches to the library, and
// serializes results.  Exit status 0 on success, 1 on validation errors,
// 2 when an exactness firewall tripped (a reproduction bundle is written).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latprof

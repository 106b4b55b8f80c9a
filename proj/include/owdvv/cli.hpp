#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace owdvv {

/*
 * owdvv compute|verify|golden [options]; args exclude the program name.
 * Exit codes: 0 success, 1 failed verification or golden drift, 2 usage or
 * schema error, 3 mathematical rejection.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace owdvv

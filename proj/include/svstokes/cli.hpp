#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace svstokes {

// Exit status: 0 success, 1 solver failure, 2 usage error.
int cli_main(int argc, char **argv);
// args excludes the program name.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace svstokes

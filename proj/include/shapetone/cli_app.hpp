#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shapetone::cli {

// Runs the command-line front end. Returns the process exit status:
// 0 success, 1 flag validation error, 2 undecodable input image,
// 3 nothing recognized in the image.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace shapetone::cli

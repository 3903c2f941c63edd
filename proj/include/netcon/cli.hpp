#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace netcon {

// Full command-line front end; args in natural order without the program
// name. Returns the process exit code: 0 certified / check passed, 1 not
// certified / check failed, 2 usage or runtime error. Streams are
// parameters so tests can capture output in-process.
int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

int run_cli(int argc, char** argv);

}  // namespace netcon

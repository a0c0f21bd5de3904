#pragma once

namespace manin::cli {

// Exit codes: 0 ok, 2 validation failure, 3 tolerance failure,
// 64 usage error / unknown subcommand, 65 malformed fan.
int run(int argc, char** argv);

}  // namespace manin::cli

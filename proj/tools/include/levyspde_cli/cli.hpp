#pragma once

namespace levyspde::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kAcceptanceFailure = 2 };

int run(int argc, char** argv);

}  // namespace levyspde::cli

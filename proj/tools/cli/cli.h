/*
 * Copyright 2026 The Photoveil Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHOTOVEIL_TOOLS_CLI_CLI_H_
#define PHOTOVEIL_TOOLS_CLI_CLI_H_

#include <ostream>

#include "photoveil/error.h"

namespace photoveil::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitAccessDenied = 2;
inline constexpr int kExitProtocol = 3;
inline constexpr int kExitIo = 4;

int ExitCodeFor(ErrorCode code);

// Entry point shared by the binary and the tests.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace photoveil::cli

#endif  // PHOTOVEIL_TOOLS_CLI_CLI_H_

// Copyright 2026 The cxc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CXC_TOOLS_CLI_H
#define CXC_TOOLS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cxc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kCapExceeded = 3 };

/// Entry point shared by the executable and the tests.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

/// 64-bit FNV-1a, printed as 16 hex digits in output headers.
uint64_t fnv1a(const std::string &text);
std::string hex64(uint64_t v);

}  // namespace cxc::cli

#endif

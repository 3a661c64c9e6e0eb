// Copyright 2026 The histbias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "histbias/error.hpp"

#ifndef HISTBIAS_DATA_DIR
#define HISTBIAS_DATA_DIR "data"
#endif

namespace histbias::testing {

inline std::filesystem::path DataPath(const std::string& name) {
  return std::filesystem::path(HISTBIAS_DATA_DIR) / name;
}

// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "histbias_tests" /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace histbias::testing

// Asserts that `stmt` throws histbias::Error of the given kind.
#define EXPECT_HB_ERROR(stmt, error_kind)                                  \
  do {                                                                     \
    try {                                                                  \
      stmt;                                                                \
      ADD_FAILURE() << "expected histbias::Error from " #stmt;             \
    } catch (const ::histbias::Error& e) {                                 \
      EXPECT_EQ(e.kind(), ::histbias::ErrorKind::error_kind) << e.what();  \
    }                                                                      \
  } while (0)

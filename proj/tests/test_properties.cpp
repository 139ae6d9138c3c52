// Copyright 2026 The tpfpu Authors
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

#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

class PropertySuite : public ::testing::TestWithParam<properties::Entry> {};

TEST_P(PropertySuite, HoldsOnRandomCases) {
  const properties::Outcome o = GetParam().run(100000, 0x5EED);
  EXPECT_GE(o.cases, 100000u);
  EXPECT_EQ(o.failures, 0u) << o.first_failure;
}

INSTANTIATE_TEST_SUITE_P(All, PropertySuite, ::testing::ValuesIn(properties::all()),
                         [](const auto& info) { return std::string(info.param.name); });

}  // namespace

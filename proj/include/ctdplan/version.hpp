// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

namespace ctd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ctd

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ctd::csv {

/// Parse CSV text into rows of fields. Handles double-quoted fields with
/// embedded commas and "" escapes; trailing \r is stripped. Empty lines are
/// skipped.
std::vector<std::vector<std::string>> parse(std::string_view text);

/// Quote a field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

/// Join fields into one CSV line (no trailing newline).
std::string join(const std::vector<std::string>& fields);

}  // namespace ctd::csv

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace ctd {

/// Written alongside every CLI output: the command, its parameters, and the
/// files involved, so an output can be reproduced byte for byte from the same
/// inputs.
struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();

    nlohmann::json to_json() const;

    /// Serialize and write to `<primary_output>.manifest.json`.
    void write_beside(const std::string& primary_output) const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ctd

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#include "ctdplan/manifest.hpp"

#include <fstream>
#include <sstream>

#include "ctdplan/error.hpp"
#include "ctdplan/version.hpp"

namespace ctd {

nlohmann::json RunManifest::to_json() const {
    return nlohmann::json{{"tool", "ctdplan"}, {"version", kVersion},   {"command", command},
                          {"parameters", parameters}, {"inputs", inputs}, {"outputs", outputs}};
}

void RunManifest::write_beside(const std::string& primary_output) const {
    write_text_file(primary_output + ".manifest.json", to_json().dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("failed writing: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ctd

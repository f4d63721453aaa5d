// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ctdplan contributors

#pragma once

#include <stdexcept>
#include <string>

namespace ctd {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid user input: malformed files, unknown names, violated preconditions.
/// The CLI maps these to exit code 1; anything else is an internal error (2).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

}  // namespace ctd

// Copyright (C) 2026 The repcount Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace repcount {

// Malformed input document. offset is the byte position reported by the parser.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Well-formed document whose content violates the expected layout.
class SchemaError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ShapeError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class TrainingError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SequencingError : public std::logic_error {
    using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DegenerateGeometry : public std::domain_error {
    using std::domain_error::domain_error;
};

class ModelFormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace repcount

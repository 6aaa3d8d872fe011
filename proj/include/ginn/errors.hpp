#pragma once

#include <stdexcept>
#include <string>

namespace ginn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dimension or shape mismatch between operands.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Non-finite or otherwise unusable numeric value.
class InvalidValue : public Error {
public:
    explicit InvalidValue(const std::string& msg) : Error(msg) {}
};

/// Same (row, col) position given twice with conflicting values.
class DuplicateEntry : public Error {
public:
    explicit DuplicateEntry(const std::string& msg) : Error(msg) {}
};

/// Adjacency dictionary violating the interchange-format invariants.
class MalformedDict : public Error {
public:
    explicit MalformedDict(const std::string& msg) : Error(msg) {}
};

/// Training loss became NaN/Inf. Carries the epoch where it happened.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, int epoch_index)
        : Error(msg), epoch(epoch_index) {}
    int epoch;
};

/// Text input (graph file, data file) that does not parse.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Checkpoint file that fails structural validation.
class CheckpointError : public Error {
public:
    explicit CheckpointError(const std::string& msg) : Error(msg) {}
};

} // namespace ginn

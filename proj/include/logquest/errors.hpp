#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace logquest {

/// Base class of every error the engine reports to callers.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in clause, query, pattern or config text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column, std::string token);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& token() const { return token_; }
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

/// A reserved predicate (`dom`, `__ans`, or `=` with the wrong arity) in user input.
class ReservedPredicateError : public Error {
public:
    using Error::Error;
};

/// No question pattern matched; surfaced to users as "question not understood".
class NoPatternMatch : public Error {
public:
    NoPatternMatch() : Error("question not understood") {}
};

/// Malformed or inconsistent data file (corpus, model, training set, config).
class DataError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Raised by relaxation when every remaining subgoal is needed.
class NothingDroppable : public Error {
public:
    NothingDroppable() : Error("no subgoal can be dropped") {}
};

}  // namespace logquest

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sedbn {

// Base of every error thrown by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NodeNotFound : public Error {
public:
    explicit NodeNotFound(const std::string& node) : Error("node not found: " + node), node_(node) {}
    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

class NotADag : public Error {
public:
    using Error::Error;
};

class NotExtendable : public Error {
public:
    using Error::Error;
};

class EdgeNotFound : public Error {
public:
    using Error::Error;
};

class InvalidGraph : public Error {
public:
    using Error::Error;
};

class InvalidCandidate : public Error {
public:
    using Error::Error;
};

class InvalidReconstruction : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownState : public Error {
public:
    UnknownState(const std::string& column, const std::string& value)
        : Error("unknown state '" + value + "' in column " + column), column_(column), value_(value) {}
    const std::string& column() const noexcept { return column_; }
    const std::string& value() const noexcept { return value_; }

private:
    std::string column_;
    std::string value_;
};

}  // namespace sedbn

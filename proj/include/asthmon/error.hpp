#pragma once

#include <stdexcept>
#include <string>

namespace asthmon {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data, file content, or configuration. Maps to CLI exit code 2.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

/// Parse failure in a rule file, ontology, CSV trace, or config file.
/// Carries the 1-based source position; the message already embeds it.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, int line, int column = 0)
        : DataError(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", col " + std::to_string(column);
        out += ": " + msg;
        return out;
    }

    int line_;
    int column_;
};

}  // namespace asthmon

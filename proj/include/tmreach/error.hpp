#ifndef TMREACH_ERROR_HPP
#define TMREACH_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tmreach
{

// Root of every error the library raises.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the natural domain of an operation (division by an
// interval containing zero, log of a non-positive range, overflow, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

// Dimension, variable-count, order or shared-domain mismatch.
class ShapeError : public Error
{
public:
    using Error::Error;
};

// Malformed text input. Carries a 1-based line and column (0 when unknown).
class ParseError : public Error
{
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column = 0)
        : Error(format(what, line, column)), line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string &what, std::size_t line, std::size_t column)
    {
        std::string out = what;
        if (line != 0) {
            out += " (line " + std::to_string(line);
            if (column != 0) {
                out += ", column " + std::to_string(column);
            }
            out += ")";
        }
        return out;
    }

    std::size_t line_;
    std::size_t column_;
};

// A guarded-transition input set is not contained in exactly one guard.
class GuardStraddle : public Error
{
public:
    using Error::Error;
};

// No self-mapping Picard remainder was found within the retry budget.
class RemainderDivergence : public Error
{
public:
    using Error::Error;
};

// Invalid model or configuration document.
class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace tmreach

#endif

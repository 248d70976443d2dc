#pragma once

#include <stdexcept>
#include <string>

namespace fmrmr {

/// Base class for every error raised by the library. The C API maps each
/// subclass onto one status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexError : public Error { using Error::Error; };
class ShapeError : public Error { using Error::Error; };
class DegenerateClassesError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };
class CatalogError : public Error { using Error::Error; };
class EmptySetError : public Error { using Error::Error; };
class AggregationError : public Error { using Error::Error; };
class LabelError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace fmrmr

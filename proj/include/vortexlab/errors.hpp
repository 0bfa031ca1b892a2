#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vortexlab {

/// Base of every error thrown by the library. `code()` is the stable
/// machine-readable name that the CLI prints as `error_code=<code>`.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define VORTEXLAB_ERROR(Name)                                        \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

VORTEXLAB_ERROR(InvalidArgument);
VORTEXLAB_ERROR(GridMismatch);
VORTEXLAB_ERROR(ZeroField);
VORTEXLAB_ERROR(EmptyField);
VORTEXLAB_ERROR(NonIntegerWinding);
VORTEXLAB_ERROR(MaskedLoop);
VORTEXLAB_ERROR(NotConverged);
VORTEXLAB_ERROR(MaskedPoint);
VORTEXLAB_ERROR(IoError);

#undef VORTEXLAB_ERROR

class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string& what)
        : Error("FormatError", what + " (byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class TruncatedError : public Error {
public:
    TruncatedError(std::size_t expected, std::size_t actual)
        : Error("TruncatedError", "payload truncated: expected " + std::to_string(expected) +
                                      " bytes, found " + std::to_string(actual)),
          expected_(expected), actual_(actual) {}
    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_, actual_;
};

class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error("ConfigError", line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Non-fatal diagnostics (paraxial validity, border energy, ...).
struct Warning {
    std::string code;
    std::string message;
};
using Warnings = std::vector<Warning>;

}  // namespace vortexlab

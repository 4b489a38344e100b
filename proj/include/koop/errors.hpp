#pragma once

#include <stdexcept>
#include <string>

namespace koop {

/// Process exit codes used by the CLI. Library errors carry the code they
/// map to so main() can translate without a type switch.
enum class ExitCode : int {
    Ok = 0,
    Usage = 2,      // bad flags, bad config, malformed or insufficient input data
    Numerical = 3,  // decomposition failure, instability, non-finite values
    Io = 4,         // unreadable/unwritable files
};

class Error : public std::runtime_error {
public:
    Error(const std::string& msg, ExitCode code)
        : std::runtime_error(msg), code_(code) {}

    ExitCode exit_code() const noexcept { return code_; }

private:
    ExitCode code_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg, ExitCode::Usage) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg, ExitCode::Usage) {}
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error(msg, ExitCode::Usage) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(msg, ExitCode::Numerical) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg, ExitCode::Io) {}
};

}  // namespace koop

#pragma once

#include <stdexcept>
#include <string>

namespace tuberegress {

// Error taxonomy, mapped onto the CLI exit codes:
//   ConfigError -> 2, DataError -> 3, FitError -> 4.
enum class Errc {
    // dataset / generic data validation
    missing_value,
    duplicate_rows,
    unknown_target,
    parse_error,
    unknown_column,
    unknown_feature,
    missing_source_column,
    schema_mismatch,
    degenerate_column,
    bin_too_small,
    subset_too_large,
    k_too_large,
    dimension_mismatch,
    zero_variance,
    zero_target,
    singular_system,
    non_finite_input,
    grid_too_small,
    // configuration / workflow
    config_invalid,
    missing_artifact,
    io_error,
    // fitting
    max_iterations_exceeded,
    fit_failed,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, int exit_code)
        : std::runtime_error(what), code_(code), exit_code_(exit_code) {}
    Errc code() const { return code_; }
    int exit_code() const { return exit_code_; }

private:
    Errc code_;
    int exit_code_;
};

class ConfigError : public Error {
public:
    ConfigError(Errc code, const std::string& what) : Error(code, what, 2) {}
};

class DataError : public Error {
public:
    DataError(Errc code, const std::string& what) : Error(code, what, 3) {}
};

class FitError : public Error {
public:
    FitError(Errc code, const std::string& what) : Error(code, what, 4) {}
};

} // namespace tuberegress

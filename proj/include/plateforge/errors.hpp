#ifndef PLATEFORGE_ERRORS_HPP
#define PLATEFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plateforge {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration (bad grid size, unknown option, ...). CLI exit code 2.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Argument outside its mathematical domain (area out of range, zero vector, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Mismatched vector/grid sizes.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Weight vector that is identically zero.
struct DegenerateWeightError : Error {
    explicit DegenerateWeightError(const std::string& msg) : Error(msg) {}
};

// Cholesky hit a non-positive pivot; the matrix is not SPD (assembly bug).
struct FactorizationError : Error {
    explicit FactorizationError(const std::string& msg) : Error(msg) {}
};

}  // namespace plateforge

#endif

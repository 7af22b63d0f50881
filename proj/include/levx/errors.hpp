#pragma once

#include <stdexcept>
#include <string>

namespace levx {

// Base error for every failure the library can signal.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments or inputs outside an operation's stated domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// A numerical procedure failed to converge or produced an unusable result.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace levx

#pragma once

#include <stdexcept>
#include <string>

namespace gpplan {

/// Base class for all recoverable gpplan failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveDefiniteError : public Error {
public:
    explicit NonPositiveDefiniteError(const std::string& what) : Error(what) {}
};

class SingularTrainingSetError : public Error {
public:
    explicit SingularTrainingSetError(const std::string& what) : Error(what) {}
};

class OutOfBoundsError : public Error {
public:
    explicit OutOfBoundsError(const std::string& what) : Error(what) {}
};

class FreeSpaceTooSmallError : public Error {
public:
    explicit FreeSpaceTooSmallError(const std::string& what) : Error(what) {}
};

class PairBudgetExhaustedError : public Error {
public:
    explicit PairBudgetExhaustedError(const std::string& what) : Error(what) {}
};

class NoPathError : public Error {
public:
    explicit NoPathError(const std::string& what) : Error(what) {}
};

class StartOrGoalBlockedError : public Error {
public:
    explicit StartOrGoalBlockedError(const std::string& what) : Error(what) {}
};

class MaxIterationsError : public Error {
public:
    explicit MaxIterationsError(const std::string& what) : Error(what) {}
};

class ParameterOutOfRangeError : public Error {
public:
    explicit ParameterOutOfRangeError(const std::string& what) : Error(what) {}
};

class DegenerateEndpointsError : public Error {
public:
    explicit DegenerateEndpointsError(const std::string& what) : Error(what) {}
};

class EmptyPathError : public Error {
public:
    explicit EmptyPathError(const std::string& what) : Error(what) {}
};

}  // namespace gpplan

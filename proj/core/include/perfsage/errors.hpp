#pragma once

#include <stdexcept>
#include <string>

namespace perfsage {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A parameter lies outside its legal domain (bad dims, densities, schedules).
class ParamError : public Error {
public:
    using Error::Error;
};

/// Metric called on inputs outside its domain (empty vectors, non-positive runtimes).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A black-box variant subprocess failed or violated the line protocol.
class ExternalVariantError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingError : public Error {
public:
    TrainingError(const std::string& msg, int epoch) : Error(msg), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

/// Closed-form fit failed (singular design matrix despite ridge).
class FitError : public Error {
public:
    using Error::Error;
};

/// Persisted file is malformed, truncated, or has a mismatched schema/version.
class LoadError : public Error {
public:
    using Error::Error;
};

/// Feature vector does not match a model's schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Dataset assembly aborted; reports how many samples were completed.
class BuildAbortError : public Error {
public:
    BuildAbortError(const std::string& msg, std::size_t completed)
        : Error(msg), completed_(completed) {}
    std::size_t completed() const { return completed_; }

private:
    std::size_t completed_;
};

}  // namespace perfsage

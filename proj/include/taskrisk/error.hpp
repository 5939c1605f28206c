#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace taskrisk {

/// Broad failure class; the CLI maps it to an exit code.
enum class ErrorClass { Validation, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
    ErrorClass error_class() const noexcept { return class_; }

private:
    ErrorClass class_;
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(ErrorClass::Validation, "format error: " + what) {}
};

/// One offending input row.
struct RowIssue {
    std::size_t line = 0;
    std::string message;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what)
        : Error(ErrorClass::Validation, "validation error: " + what) {}
    explicit ValidationError(std::vector<RowIssue> issues);

    /// Line of the first offending row, 0 when the error is not tied to a row.
    std::size_t line() const noexcept { return issues_.empty() ? 0 : issues_.front().line; }
    const std::vector<RowIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<RowIssue> issues_;
};

class ConflictError : public Error {
public:
    explicit ConflictError(const std::string& what) : Error(ErrorClass::Validation, "conflict: " + what) {}
};

class EmptyCorpusError : public Error {
public:
    explicit EmptyCorpusError(const std::string& what) : Error(ErrorClass::Validation, "empty corpus: " + what) {}
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what) : Error(ErrorClass::Validation, "invalid parameter: " + what) {}
};

class PathError : public Error {
public:
    explicit PathError(const std::string& path, const std::string& why = "cannot open")
        : Error(ErrorClass::Validation, "path error: " + why + ": " + path), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorClass::Validation, "config error: " + what) {}
};

class EmptyGroupError : public Error {
public:
    EmptyGroupError(const std::string& group, std::vector<std::string> unmatched);
    const std::vector<std::string>& unmatched() const noexcept { return unmatched_; }

private:
    std::vector<std::string> unmatched_;
};

class DegenerateColumnError : public Error {
public:
    explicit DegenerateColumnError(const std::string& attribute)
        : Error(ErrorClass::Numeric, "degenerate column (zero variance): " + attribute), attribute_(attribute) {}
    const std::string& attribute() const noexcept { return attribute_; }

private:
    std::string attribute_;
};

class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what) : Error(ErrorClass::Numeric, "singular matrix: " + what) {}
};

class UndefinedKmoError : public Error {
public:
    UndefinedKmoError() : Error(ErrorClass::Numeric, "KMO undefined: all off-diagonal correlations are zero") {}
};

class UndefinedSilhouetteError : public Error {
public:
    UndefinedSilhouetteError()
        : Error(ErrorClass::Numeric, "silhouette undefined: fewer than two non-empty clusters") {}
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& routine, double last_delta);
    double last_delta() const noexcept { return last_delta_; }

private:
    double last_delta_;
};

}  // namespace taskrisk

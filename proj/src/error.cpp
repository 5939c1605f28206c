#include "taskrisk/error.hpp"

#include <fmt/format.h>

namespace taskrisk {

namespace {

std::string describe(const std::vector<RowIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) out += "; ";
        out += fmt::format("line {}: {}", issue.line, issue.message);
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<RowIssue> issues)
    : Error(ErrorClass::Validation, "validation error: " + describe(issues)), issues_(std::move(issues)) {}

EmptyGroupError::EmptyGroupError(const std::string& group, std::vector<std::string> unmatched)
    : Error(ErrorClass::Validation,
            fmt::format("empty group '{}' ({} unmatched codes{}{})", group, unmatched.size(),
                        unmatched.empty() ? "" : ": ", fmt::join(unmatched, ", "))),
      unmatched_(std::move(unmatched)) {}

ConvergenceError::ConvergenceError(const std::string& routine, double last_delta)
    : Error(ErrorClass::Numeric, fmt::format("{} did not converge (last delta {:.3g})", routine, last_delta)),
      last_delta_(last_delta) {}

}  // namespace taskrisk

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace resokit {

/// Malformed or out-of-contract input. The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure did not produce a usable result. Exit status 1.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string field;
    std::string constraint;
};

/// Thrown by validators; carries every violated invariant, not just the first.
class ValidationError : public InputError {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

}  // namespace resokit

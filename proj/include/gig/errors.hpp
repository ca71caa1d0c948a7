#pragma once

#include <stdexcept>
#include <string>

namespace gig {

// A parameter fell outside its admissible domain. `field()` names the offender.
class DomainError : public std::invalid_argument {
public:
    DomainError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// An operation that needs a struck contract was called with chi = false.
class NoContract : public std::logic_error {
public:
    NoContract() : std::logic_error("operation requires a struck contract (chi = true)") {}
};

// A contracted round was forced through even though the worker's certainty
// equivalent falls short of his reference value.
class ParticipationViolated : public std::runtime_error {
public:
    ParticipationViolated(double ce, double reference)
        : std::runtime_error("participation constraint violated: certainty equivalent " +
                             std::to_string(ce) + " < reference " + std::to_string(reference)),
          ce_(ce), reference_(reference) {}

    double ce() const noexcept { return ce_; }
    double reference() const noexcept { return reference_; }

private:
    double ce_;
    double reference_;
};

// A tabulated policy cannot serve the simulated reference range.
class PolicyRangeError : public std::runtime_error {
public:
    explicit PolicyRangeError(const std::string& message) : std::runtime_error(message) {}
};

// Invalid quadrature configuration.
class QuadratureError : public std::invalid_argument {
public:
    explicit QuadratureError(const std::string& message) : std::invalid_argument(message) {}
};

}  // namespace gig

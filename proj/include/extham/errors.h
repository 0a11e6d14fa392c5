#pragma once

#include <stdexcept>
#include <string>

namespace extham {

/// Evaluation outside the domain of a phase-space function (wedge violation,
/// square root of a negative quantity, u <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// gamma(u) or 1/gamma(u)^2 is singular at the requested u.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, double u) : DomainError(what + " at u=" + std::to_string(u)), u_(u) {}
    double u() const { return u_; }

private:
    double u_;
};

}  // namespace extham

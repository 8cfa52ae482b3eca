#pragma once

#include <stdexcept>
#include <string>

namespace todamlj {

/// Thrown when a potential is evaluated outside its domain, or when a chain
/// state drives a bond out of the domain.  Carries the offending argument and,
/// when known, the bond index and integration step at which it happened.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& msg, double x, long bond = -1, long long step = -1)
        : std::domain_error(msg), x_(x), bond_(bond), step_(step) {}

    double offending_x() const { return x_; }
    long bond() const { return bond_; }          // -1 if not bond-related
    long long step() const { return step_; }     // -1 if outside time integration

private:
    double x_;
    long bond_;
    long long step_;
};

}  // namespace todamlj

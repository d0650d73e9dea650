#pragma once

#include <stdexcept>
#include <string>

namespace ruinlab {

/// Argument outside the mathematical domain of a formula (non-finite input,
/// delta = 0 passed to a delta > 0 formula, negative probability inputs).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid parameter set or simulation configuration. The message names the
/// violated invariant.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ConfigError(what);
}

inline void require_domain(bool cond, const std::string& what) {
    if (!cond) throw DomainError(what);
}

}  // namespace detail
}  // namespace ruinlab

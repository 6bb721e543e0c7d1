#pragma once

#include <stdexcept>
#include <string>

namespace fgwc {

/// A point was evaluated outside the domain of a map or function.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// invert_map found no branch able to produce the requested value.
class NoPreimage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A step-size schedule emitted a value outside [0, 1].
class ScheduleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// best_approx on a set with no intervals.
class EmptySet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario, map definition, or expression text.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fgwc

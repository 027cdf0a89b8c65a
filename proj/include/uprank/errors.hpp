#pragma once

#include <stdexcept>
#include <string>

namespace uprank {

/// Malformed input (bad CSV row, bad JSON shape, bad numeric field).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Input parsed but violates a model invariant; the message names the
/// offending record.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Possible-world enumeration would exceed the configured cap.
class WorldCapError : public std::runtime_error {
public:
    WorldCapError(const std::string& what) : std::runtime_error(what) {}
};

/// A generator config that cannot be satisfied.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Back-substitution refused: 1 - rho below the solver tolerance.
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

/// A computed probability left its admissible range by more than
/// floating-point dust; indicates a logic bug, not an input problem.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace uprank

#ifndef IMS_ERRORS_HPP
#define IMS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ims {

// Evaluation requested outside the open unit disk, or a composition left it.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// A primitive (path integral) failed to converge to the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

// Division by a near-zero derivative or similar runtime numerical failure.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Circle integral did not stabilize before the point budget ran out.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter outside a family's validity range, ladder bounds, etc.
class RangeError : public std::invalid_argument {
public:
    explicit RangeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Regression window longer than the radius ladder.
class LadderTooShort : public std::invalid_argument {
public:
    explicit LadderTooShort(const std::string& msg) : std::invalid_argument(msg) {}
};

// Area-integral bisection endpoints do not bracket the divergence transition.
class BracketError : public std::runtime_error {
public:
    explicit BracketError(const std::string& msg) : std::runtime_error(msg) {}
};

// Map-expression text did not parse; position is a 0-based byte offset.
class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t position, const std::string& msg)
        : std::invalid_argument(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

} // namespace ims

#endif

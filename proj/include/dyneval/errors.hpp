#pragma once

#include <stdexcept>
#include <string>

namespace dyneval {

// Bad input that the caller could have checked: division by zero, mixed
// rings, non-monic divisors, non-idempotent splits, and the like.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input. Carries a character position when known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, std::size_t pos = std::string::npos)
        : std::runtime_error(pos == std::string::npos ? what
                                                      : what + " (at position " + std::to_string(pos) + ")"),
          pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// A broken internal invariant. Seeing one of these is a bug in the engine,
// not in the caller.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace dyneval

#ifndef ZLAB_ERRORS_HPP
#define ZLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zlab {

// Requested accuracy cannot be met (asymptotic series bottomed out, etc.).
struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive refinement exceeded its depth cap.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sign-change scan found no crossing; usually signals an integration bug.
struct not_found_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A denominator is numerically meaningless (value at/near a zero).
struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bracketing search for an inverse ran past its interval cap.
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    std::size_t position;
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct cache_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct binding_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace zlab

#endif

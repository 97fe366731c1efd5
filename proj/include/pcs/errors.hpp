#ifndef PCS_ERRORS_HPP
#define PCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcs {

// Malformed input file (bad row, bad JSON, unknown column).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Input parsed fine but violates a domain constraint (negative size,
// non-monotone demand table, bad distribution parameter).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant breach: a policy handed back an over-capacity plan,
// the event loop exceeded its bound, etc. Maps to exit code 2 in the CLI.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

} // namespace pcs

#endif

#ifndef MECM_ERROR_HPP
#define MECM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mecm {

// Bad input: shapes, ranges, malformed files. CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// The math has no answer for this input (singular system, total conflict). CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace detail
}  // namespace mecm

#endif  // MECM_ERROR_HPP

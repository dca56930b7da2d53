#ifndef LCR_ERRORS_HPP
#define LCR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcr {

// Input file could not be parsed; line is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, long line_no = 0)
        : std::runtime_error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
          line(line_no) {}
    long line;
};

// Requested problem size exceeds what an exact routine supports.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lcr

#endif

#ifndef ZEROONE_ERROR_HPP
#define ZEROONE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace zeroone {

// Error codes shared with the C API / CLI exit codes.
enum class ErrorCode {
    InvalidArgument = 1,
    Parse = 2,
    Hypothesis = 3,
    DegenerateContext = 4,
    Internal = 5,
    Overflow = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& msg)
        : Error(ErrorCode::InvalidArgument, msg) {}
};

// Raised by file parsers; carries a 1-based line number.
struct ParseError : Error {
    ParseError(int line, const std::string& msg)
        : Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + msg),
          line(line) {}
    int line;
};

// A claim hypothesis does not hold (e.g. system not weakly separative).
struct HypothesisError : Error {
    explicit HypothesisError(const std::string& msg)
        : Error(ErrorCode::Hypothesis, msg) {}
};

// A tested sub-pair has weight zero; the sign calculus is undefined there.
struct DegenerateContextError : Error {
    explicit DegenerateContextError(const std::string& msg)
        : Error(ErrorCode::DegenerateContext, msg) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& msg)
        : Error(ErrorCode::Internal, msg) {}
};

} // namespace zeroone

#endif

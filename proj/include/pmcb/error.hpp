#ifndef PMCB_ERROR_HPP
#define PMCB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace pmcb {

enum class ErrorCode {
    EulerViolation,
    DuplicateVertex,
    NegativeWeight,
    Disconnected,
    TooSmall,
    NotASubtree,
    EdgeAbsent,
    SameTree,
    NotFinalized,
    NotAncestor,
    InsufficientRank,
    SameVertex,
    UnknownTriple,
    DegenerateWedge,
    ParseError,
    Overflow,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, long line = -1)
        : std::runtime_error(what), code_(code), line_(line) {}

    ErrorCode code() const { return code_; }
    /// Input line number for ParseError, -1 otherwise.
    long line() const { return line_; }

private:
    ErrorCode code_;
    long line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what, long line = -1) {
    throw Error(code, what, line);
}

} // namespace pmcb

#endif

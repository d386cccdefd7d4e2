#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fink {

enum class ErrorCode {
    InvalidVector,
    InvalidSequence,
    OverlappingSupports,
    EmptyInput,
    LevelMismatch,
    OutOfRange,
    AtomOverlap,
    InvalidStairFunction,
    InvalidCanonicalMap,
    NotInFront,
    IncompatibleReduct,
    MissingColor,
    ParseError,
    Overflow,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace fink

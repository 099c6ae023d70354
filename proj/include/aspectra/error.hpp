#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aspectra {

enum class Errc {
    NonNumericCell,
    DuplicateColumn,
    MissingTarget,
    EmptyTable,
    MalformedInput,
    OverlappingGroups,
    NotCovering,
    EmptyGroup,
    BadIndex,
    ZeroVarianceColumn,
    RankDeficient,
    BadK,
    SchemaMismatch,
    SubprocessFailure,
    LengthMismatch,
    SingularDesign,
    InvalidArgument,
    NonDeterministicModel,
};

std::string_view errc_name(Errc code) noexcept;

// All recoverable failures in the library are reported through this type.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace aspectra

#include "aspectra/error.hpp"

namespace aspectra {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::NonNumericCell: return "NonNumericCell";
        case Errc::DuplicateColumn: return "DuplicateColumn";
        case Errc::MissingTarget: return "MissingTarget";
        case Errc::EmptyTable: return "EmptyTable";
        case Errc::MalformedInput: return "MalformedInput";
        case Errc::OverlappingGroups: return "OverlappingGroups";
        case Errc::NotCovering: return "NotCovering";
        case Errc::EmptyGroup: return "EmptyGroup";
        case Errc::BadIndex: return "BadIndex";
        case Errc::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::BadK: return "BadK";
        case Errc::SchemaMismatch: return "SchemaMismatch";
        case Errc::SubprocessFailure: return "SubprocessFailure";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::SingularDesign: return "SingularDesign";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::NonDeterministicModel: return "NonDeterministicModel";
    }
    return "Unknown";
}

}  // namespace aspectra

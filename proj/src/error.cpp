#include "actfloor/error.hpp"

namespace actfloor {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingChannel: return "MissingChannel";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::IllegalLabel: return "IllegalLabel";
    case ErrorCode::InvalidRoomIds: return "InvalidRoomIds";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NoEntrance: return "NoEntrance";
    case ErrorCode::RoomTooSmall: return "RoomTooSmall";
    case ErrorCode::NoRoomEntrance: return "NoRoomEntrance";
    case ErrorCode::NoSharedWall: return "NoSharedWall";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AllEdgesUnsolvable: return "AllEdgesUnsolvable";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::NoClosedRegion: return "NoClosedRegion";
    case ErrorCode::AmbiguousRoom: return "AmbiguousRoom";
    case ErrorCode::NoLivingRoom: return "NoLivingRoom";
    case ErrorCode::ZeroEntropy: return "ZeroEntropy";
    case ErrorCode::EmptyShape: return "EmptyShape";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::GeneratorFailure: return "GeneratorFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace actfloor

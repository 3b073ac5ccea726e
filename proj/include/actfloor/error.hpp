#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace actfloor {

enum class ErrorCode {
  InvalidArgument,
  MissingChannel,
  SizeMismatch,
  IllegalLabel,
  InvalidRoomIds,
  IoFailure,
  NoEntrance,
  RoomTooSmall,
  NoRoomEntrance,
  NoSharedWall,
  EmptyInput,
  AllEdgesUnsolvable,
  ScoreOutOfRange,
  NonFiniteInput,
  EmptyIndex,
  NoClosedRegion,
  AmbiguousRoom,
  NoLivingRoom,
  ZeroEntropy,
  EmptyShape,
  UnknownPlayer,
  MalformedLine,
  GeneratorFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (CLI exit codes, HTTP statuses) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace actfloor

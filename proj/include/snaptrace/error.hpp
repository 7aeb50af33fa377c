#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snaptrace {

// Every named failure across the library. The HTTP layer maps these onto
// status codes; the CLI maps them onto exit codes.
enum class Errc {
  EmptySnapshot,
  LexError,
  BenchError,
  InconsistentScript,
  EmptySession,
  ReferenceUnparseable,
  KTooLarge,
  IoError,
  CorruptBlob,
  SequenceGap,
  NotFound,
  CorruptLog,
  FormatVersion,
  AuthFailed,
  AuthExpired,
  QuestionNotFound,
  SessionExists,
  ResumeAvailable,
  SessionNotActive,
  NotOwner,
  MissingSnapshot,
  NothingToResume,
  SessionNotFound,
  AlreadyEnded,
  NoSnapshotYet,
  Forbidden,
  TicketNotOpen,
  TicketNotFound,
  NoSeededError,
  BadRequest,
  StoreUnreadable,
  SessionNotEnded,
  ServerUnreachable,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message) : std::runtime_error(message), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }
  [[nodiscard]] std::string_view name() const { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace snaptrace

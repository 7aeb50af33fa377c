#include "snaptrace/error.hpp"

namespace snaptrace {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptySnapshot: return "EmptySnapshot";
    case Errc::LexError: return "LexError";
    case Errc::BenchError: return "BenchError";
    case Errc::InconsistentScript: return "InconsistentScript";
    case Errc::EmptySession: return "EmptySession";
    case Errc::ReferenceUnparseable: return "ReferenceUnparseable";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::IoError: return "IoError";
    case Errc::CorruptBlob: return "CorruptBlob";
    case Errc::SequenceGap: return "SequenceGap";
    case Errc::NotFound: return "NotFound";
    case Errc::CorruptLog: return "CorruptLog";
    case Errc::FormatVersion: return "FormatVersion";
    case Errc::AuthFailed: return "AuthFailed";
    case Errc::AuthExpired: return "AuthExpired";
    case Errc::QuestionNotFound: return "QuestionNotFound";
    case Errc::SessionExists: return "SessionExists";
    case Errc::ResumeAvailable: return "ResumeAvailable";
    case Errc::SessionNotActive: return "SessionNotActive";
    case Errc::NotOwner: return "NotOwner";
    case Errc::MissingSnapshot: return "MissingSnapshot";
    case Errc::NothingToResume: return "NothingToResume";
    case Errc::SessionNotFound: return "SessionNotFound";
    case Errc::AlreadyEnded: return "AlreadyEnded";
    case Errc::NoSnapshotYet: return "NoSnapshotYet";
    case Errc::Forbidden: return "Forbidden";
    case Errc::TicketNotOpen: return "TicketNotOpen";
    case Errc::TicketNotFound: return "TicketNotFound";
    case Errc::NoSeededError: return "NoSeededError";
    case Errc::BadRequest: return "BadRequest";
    case Errc::StoreUnreadable: return "StoreUnreadable";
    case Errc::SessionNotEnded: return "SessionNotEnded";
    case Errc::ServerUnreachable: return "ServerUnreachable";
  }
  return "Unknown";
}

}  // namespace snaptrace

#pragma once

// JSON forms of the domain records, shared by the record files and the wire
// protocol. Timestamps are integer milliseconds since the Unix epoch.

#include "json.hpp"
#include "snaptrace/model.hpp"

namespace snaptrace {

using json = nlohmann::json;

void to_json(json& j, const User& u);
void from_json(const json& j, User& u);

void to_json(json& j, const Question& q);
void from_json(const json& j, Question& q);

void to_json(json& j, const LineDelta& d);
void from_json(const json& j, LineDelta& d);

void to_json(json& j, const HelpTicket& t);
void from_json(const json& j, HelpTicket& t);

void to_json(json& j, const AuthToken& t);
void from_json(const json& j, AuthToken& t);

void to_json(json& j, const DebugEvent& e);
void from_json(const json& j, DebugEvent& e);

json session_to_json(const SessionRecord& s, bool include_events = true);

json behavior_sequence_to_json(const BehaviorSequence& seq);
BehaviorSequence behavior_sequence_from_json(const json& j);

/// Wire form of a snapshot: {path: base64 bytes}.
json snapshot_to_json(const Snapshot& s);
/// Throws Error(BadRequest) on a malformed object, Error(EmptySnapshot) when empty.
Snapshot snapshot_from_json(const json& j);

}  // namespace snaptrace

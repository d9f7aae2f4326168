#pragma once

namespace mlink {

// Numeric values are the shared-library ABI (see include/motionlink/motionlink.h);
// capi.cpp static-asserts the two stay in sync.
enum class Status : int {
  Ok = 0,
  InvalidArg = 1,
  TooShort = 2,
  BadMagic = 3,
  UnsupportedVersion = 4,
  UnsupportedCipher = 5,
  BadLength = 6,
  WrongMsgType = 7,
  AuthFailure = 8,
  ChecksumMismatch = 9,
  NonFiniteSensorValue = 10,
  RangeError = 11,
  OutOfOrderTimestamp = 12,
  EmptyLog = 13,
  NoHapticEvents = 14,
  SessionMismatch = 15,
  ParseError = 16,
  IoError = 17,
  TransportClosed = 18,
  SourceExhausted = 19,
  BufferTooSmall = 20,
  SocketError = 21,
  DegenerateSeries = 22,
};

inline const char* status_str(Status s) {
  switch (s) {
    case Status::Ok: return "Ok";
    case Status::InvalidArg: return "InvalidArg";
    case Status::TooShort: return "TooShort";
    case Status::BadMagic: return "BadMagic";
    case Status::UnsupportedVersion: return "UnsupportedVersion";
    case Status::UnsupportedCipher: return "UnsupportedCipher";
    case Status::BadLength: return "BadLength";
    case Status::WrongMsgType: return "WrongMsgType";
    case Status::AuthFailure: return "AuthFailure";
    case Status::ChecksumMismatch: return "ChecksumMismatch";
    case Status::NonFiniteSensorValue: return "NonFiniteSensorValue";
    case Status::RangeError: return "RangeError";
    case Status::OutOfOrderTimestamp: return "OutOfOrderTimestamp";
    case Status::EmptyLog: return "EmptyLog";
    case Status::NoHapticEvents: return "NoHapticEvents";
    case Status::SessionMismatch: return "SessionMismatch";
    case Status::ParseError: return "ParseError";
    case Status::IoError: return "IoError";
    case Status::TransportClosed: return "TransportClosed";
    case Status::SourceExhausted: return "SourceExhausted";
    case Status::BufferTooSmall: return "BufferTooSmall";
    case Status::SocketError: return "SocketError";
    case Status::DegenerateSeries: return "DegenerateSeries";
  }
  return "Unknown";
}

}  // namespace mlink

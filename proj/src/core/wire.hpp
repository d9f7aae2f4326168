#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "core/error.hpp"

namespace mlink::wire {

// On-air frame = 18-byte header + 34-byte envelope + payload.
//
//   header   magic "MLNK" (4) | version u8 | msg_type u8 | session_id u32 |
//            sequence u32 | payload_len u16 | flags u16          -> 18 bytes
//   envelope env_version u8 | cipher_id u8 | nonce 16 | auth_tag 16 -> 34 bytes
//   motion   timestamp_ms u64 | ax ay az f32 | gx gy gz f32 | crc32 u32 -> 36 bytes
//   haptic   ref_timestamp_ms u64 | intensity f32 | sharpness f32 |
//            duration_ms u16                                      -> 18 bytes
//
// All integers and floats little-endian. The motion checksum is CRC-32
// (IEEE 802.3, reflected, init 0xFFFFFFFF, final xor 0xFFFFFFFF) over the
// first 32 payload bytes, stored as raw bits, never interpreted as a float.

constexpr size_t HEADER_SIZE = 18;
constexpr size_t ENVELOPE_SIZE = 34;
constexpr size_t MOTION_PAYLOAD_SIZE = 36;
constexpr size_t HAPTIC_PAYLOAD_SIZE = 18;
constexpr size_t MOTION_FRAME_SIZE = HEADER_SIZE + ENVELOPE_SIZE + MOTION_PAYLOAD_SIZE;  // 88
constexpr size_t HAPTIC_FRAME_SIZE = HEADER_SIZE + ENVELOPE_SIZE + HAPTIC_PAYLOAD_SIZE;  // 70

constexpr std::array<uint8_t, 4> MAGIC = {'M', 'L', 'N', 'K'};
constexpr uint8_t PROTOCOL_VERSION = 1;
constexpr uint8_t ENVELOPE_VERSION = 1;
constexpr uint8_t CIPHER_NULL = 0;

constexpr uint8_t MSG_MOTION = 1;
constexpr uint8_t MSG_HAPTIC = 2;

using SessionKey = std::array<uint8_t, 16>;
using NonceSalt = std::array<uint8_t, 8>;

struct MotionFrame {
  uint64_t timestamp_ms = 0;  // UNIX epoch milliseconds
  float accel[3] = {0, 0, 0};  // m/s^2
  float gyro[3] = {0, 0, 0};   // rad/s

  bool operator==(const MotionFrame&) const = default;
};

struct FrameHeader {
  uint8_t version = PROTOCOL_VERSION;
  uint8_t msg_type = MSG_MOTION;
  uint32_t session_id = 0;
  uint32_t sequence = 0;  // per-session, per-msg_type counter, starts at 0
  uint16_t payload_len = 0;
  uint16_t flags = 0;  // reserved
};

struct HapticTrigger {
  uint64_t ref_timestamp_ms = 0;  // timestamp of the motion frame that triggered it
  float intensity = 1.0f;         // [0, 1]
  float sharpness = 1.0f;         // [0, 1]
  uint16_t duration_ms = 20;

  bool operator==(const HapticTrigger&) const = default;
};

// Filled on decode, also on failure as far as parsing got; lets callers report
// the offending sequence number alongside the error.
struct DecodeInfo {
  uint32_t session_id = 0;
  uint32_t sequence = 0;
  uint8_t msg_type = 0;
};

Status encode_motion(const MotionFrame& frame, const SessionKey& key, const FrameHeader& header,
                     const NonceSalt& salt, std::span<uint8_t, MOTION_FRAME_SIZE> out);

Status decode_motion(std::span<const uint8_t> bytes, const SessionKey& key, MotionFrame& out,
                     DecodeInfo* info = nullptr);

Status encode_haptic(const HapticTrigger& trigger, const SessionKey& key,
                     const FrameHeader& header, const NonceSalt& salt,
                     std::span<uint8_t, HAPTIC_FRAME_SIZE> out);

Status decode_haptic(std::span<const uint8_t> bytes, const SessionKey& key, HapticTrigger& out,
                     DecodeInfo* info = nullptr);

// Header-only peek for routing (no integrity checks beyond structure).
Status peek_header(std::span<const uint8_t> bytes, FrameHeader& out);

// Recomputes the auth tag in place over the (possibly modified) header and
// payload. Test and fault-injection device: corruption applied inside the
// auth boundary reaches the checksum layer instead of failing auth.
Status reseal(std::span<uint8_t> frame_bytes, const SessionKey& key);

struct ThroughputReport {
  double bits_per_s = 0;
  double kbit_per_s = 0;   // /1000
  double kibit_per_s = 0;  // /1024
};

Status throughput_report(double rate_hz, uint64_t on_air_bytes, ThroughputReport& out);

}  // namespace mlink::wire

#include "core/wire.hpp"

#include <cmath>
#include <cstring>

#include "core/bytes.hpp"
#include "core/crc32.hpp"
#include "core/siphash.hpp"

namespace mlink::wire {

namespace {

// Byte offsets within a frame.
constexpr size_t OFF_MAGIC = 0;
constexpr size_t OFF_VERSION = 4;
constexpr size_t OFF_MSG_TYPE = 5;
constexpr size_t OFF_SESSION_ID = 6;
constexpr size_t OFF_SEQUENCE = 10;
constexpr size_t OFF_PAYLOAD_LEN = 14;
constexpr size_t OFF_FLAGS = 16;
constexpr size_t OFF_ENV_VERSION = 18;
constexpr size_t OFF_CIPHER_ID = 19;
constexpr size_t OFF_NONCE = 20;
constexpr size_t OFF_TAG = 36;
constexpr size_t OFF_PAYLOAD = HEADER_SIZE + ENVELOPE_SIZE;  // 52

void write_header(uint8_t* out, const FrameHeader& h) {
  std::memcpy(out + OFF_MAGIC, MAGIC.data(), MAGIC.size());
  out[OFF_VERSION] = h.version;
  out[OFF_MSG_TYPE] = h.msg_type;
  write_u32_le(out + OFF_SESSION_ID, h.session_id);
  write_u32_le(out + OFF_SEQUENCE, h.sequence);
  write_u16_le(out + OFF_PAYLOAD_LEN, h.payload_len);
  write_u16_le(out + OFF_FLAGS, h.flags);
}

void read_header(const uint8_t* in, FrameHeader& h) {
  h.version = in[OFF_VERSION];
  h.msg_type = in[OFF_MSG_TYPE];
  h.session_id = read_u32_le(in + OFF_SESSION_ID);
  h.sequence = read_u32_le(in + OFF_SEQUENCE);
  h.payload_len = read_u16_le(in + OFF_PAYLOAD_LEN);
  h.flags = read_u16_le(in + OFF_FLAGS);
}

// Tag input: header bytes, env_version, cipher_id, nonce, payload. The tag
// itself is excluded; flipping any covered byte invalidates the tag.
std::array<uint8_t, 16> compute_tag(const SessionKey& key, const uint8_t* frame,
                                    size_t payload_len) {
  std::array<uint8_t, HEADER_SIZE + 18 + MOTION_PAYLOAD_SIZE> buf;
  size_t n = 0;
  std::memcpy(buf.data() + n, frame, HEADER_SIZE);
  n += HEADER_SIZE;
  buf[n++] = frame[OFF_ENV_VERSION];
  buf[n++] = frame[OFF_CIPHER_ID];
  std::memcpy(buf.data() + n, frame + OFF_NONCE, 16);
  n += 16;
  std::memcpy(buf.data() + n, frame + OFF_PAYLOAD, payload_len);
  n += payload_len;
  return siphash24_128(key, buf.data(), n);
}

void write_envelope(uint8_t* out, const FrameHeader& h, const NonceSalt& salt,
                    const SessionKey& key, size_t payload_len) {
  out[OFF_ENV_VERSION] = ENVELOPE_VERSION;
  out[OFF_CIPHER_ID] = CIPHER_NULL;
  write_u32_le(out + OFF_NONCE, h.session_id);
  write_u32_le(out + OFF_NONCE + 4, h.sequence);
  std::memcpy(out + OFF_NONCE + 8, salt.data(), salt.size());
  const auto tag = compute_tag(key, out, payload_len);
  std::memcpy(out + OFF_TAG, tag.data(), tag.size());
}

bool finite3(const float v[3]) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// Shared structural validation; returns the expected payload size via out.
Status validate_common(std::span<const uint8_t> bytes, uint8_t expect_type, size_t expect_total,
                       size_t expect_payload, DecodeInfo* info) {
  if (bytes.size() != expect_total) return Status::TooShort;
  const uint8_t* p = bytes.data();
  if (info != nullptr) {
    info->session_id = read_u32_le(p + OFF_SESSION_ID);
    info->sequence = read_u32_le(p + OFF_SEQUENCE);
    info->msg_type = p[OFF_MSG_TYPE];
  }
  if (std::memcmp(p + OFF_MAGIC, MAGIC.data(), MAGIC.size()) != 0) return Status::BadMagic;
  if (p[OFF_VERSION] != PROTOCOL_VERSION) return Status::UnsupportedVersion;
  if (p[OFF_MSG_TYPE] != expect_type) return Status::WrongMsgType;
  if (read_u16_le(p + OFF_PAYLOAD_LEN) != expect_payload) return Status::BadLength;
  if (p[OFF_ENV_VERSION] != ENVELOPE_VERSION) return Status::UnsupportedVersion;
  if (p[OFF_CIPHER_ID] != CIPHER_NULL) return Status::UnsupportedCipher;
  return Status::Ok;
}

Status check_auth(std::span<const uint8_t> bytes, const SessionKey& key, size_t payload_len) {
  const auto expect = compute_tag(key, bytes.data(), payload_len);
  // Constant-time compare; a timing oracle on the tag would defeat it.
  uint8_t diff = 0;
  for (size_t i = 0; i < expect.size(); ++i) diff |= expect[i] ^ bytes[OFF_TAG + i];
  return diff == 0 ? Status::Ok : Status::AuthFailure;
}

}  // namespace

Status encode_motion(const MotionFrame& frame, const SessionKey& key, const FrameHeader& header,
                     const NonceSalt& salt, std::span<uint8_t, MOTION_FRAME_SIZE> out) {
  if (!finite3(frame.accel) || !finite3(frame.gyro)) return Status::NonFiniteSensorValue;
  FrameHeader h = header;
  h.msg_type = MSG_MOTION;
  h.payload_len = MOTION_PAYLOAD_SIZE;

  uint8_t* p = out.data();
  write_header(p, h);

  uint8_t* pl = p + OFF_PAYLOAD;
  write_u64_le(pl, frame.timestamp_ms);
  for (int i = 0; i < 3; ++i) write_f32_le(pl + 8 + 4 * i, frame.accel[i]);
  for (int i = 0; i < 3; ++i) write_f32_le(pl + 20 + 4 * i, frame.gyro[i]);
  write_u32_le(pl + 32, crc32_ieee(pl, 32));

  write_envelope(p, h, salt, key, MOTION_PAYLOAD_SIZE);
  return Status::Ok;
}

Status decode_motion(std::span<const uint8_t> bytes, const SessionKey& key, MotionFrame& out,
                     DecodeInfo* info) {
  Status st = validate_common(bytes, MSG_MOTION, MOTION_FRAME_SIZE, MOTION_PAYLOAD_SIZE, info);
  if (st != Status::Ok) return st;
  st = check_auth(bytes, key, MOTION_PAYLOAD_SIZE);
  if (st != Status::Ok) return st;

  const uint8_t* pl = bytes.data() + OFF_PAYLOAD;
  if (crc32_ieee(pl, 32) != read_u32_le(pl + 32)) return Status::ChecksumMismatch;

  out.timestamp_ms = read_u64_le(pl);
  for (int i = 0; i < 3; ++i) out.accel[i] = read_f32_le(pl + 8 + 4 * i);
  for (int i = 0; i < 3; ++i) out.gyro[i] = read_f32_le(pl + 20 + 4 * i);
  return Status::Ok;
}

Status encode_haptic(const HapticTrigger& trigger, const SessionKey& key,
                     const FrameHeader& header, const NonceSalt& salt,
                     std::span<uint8_t, HAPTIC_FRAME_SIZE> out) {
  if (!std::isfinite(trigger.intensity) || !std::isfinite(trigger.sharpness))
    return Status::NonFiniteSensorValue;
  if (trigger.intensity < 0.0f || trigger.intensity > 1.0f) return Status::RangeError;
  if (trigger.sharpness < 0.0f || trigger.sharpness > 1.0f) return Status::RangeError;
  FrameHeader h = header;
  h.msg_type = MSG_HAPTIC;
  h.payload_len = HAPTIC_PAYLOAD_SIZE;

  uint8_t* p = out.data();
  write_header(p, h);

  uint8_t* pl = p + OFF_PAYLOAD;
  write_u64_le(pl, trigger.ref_timestamp_ms);
  write_f32_le(pl + 8, trigger.intensity);
  write_f32_le(pl + 12, trigger.sharpness);
  write_u16_le(pl + 16, trigger.duration_ms);

  write_envelope(p, h, salt, key, HAPTIC_PAYLOAD_SIZE);
  return Status::Ok;
}

Status decode_haptic(std::span<const uint8_t> bytes, const SessionKey& key, HapticTrigger& out,
                     DecodeInfo* info) {
  Status st = validate_common(bytes, MSG_HAPTIC, HAPTIC_FRAME_SIZE, HAPTIC_PAYLOAD_SIZE, info);
  if (st != Status::Ok) return st;
  st = check_auth(bytes, key, HAPTIC_PAYLOAD_SIZE);
  if (st != Status::Ok) return st;

  const uint8_t* pl = bytes.data() + OFF_PAYLOAD;
  out.ref_timestamp_ms = read_u64_le(pl);
  out.intensity = read_f32_le(pl + 8);
  out.sharpness = read_f32_le(pl + 12);
  out.duration_ms = read_u16_le(pl + 16);
  return Status::Ok;
}

Status peek_header(std::span<const uint8_t> bytes, FrameHeader& out) {
  if (bytes.size() < HEADER_SIZE) return Status::TooShort;
  if (std::memcmp(bytes.data() + OFF_MAGIC, MAGIC.data(), MAGIC.size()) != 0)
    return Status::BadMagic;
  read_header(bytes.data(), out);
  return Status::Ok;
}

Status reseal(std::span<uint8_t> frame_bytes, const SessionKey& key) {
  if (frame_bytes.size() != MOTION_FRAME_SIZE && frame_bytes.size() != HAPTIC_FRAME_SIZE)
    return Status::TooShort;
  const size_t payload_len = frame_bytes.size() - OFF_PAYLOAD;
  const auto tag = compute_tag(key, frame_bytes.data(), payload_len);
  std::memcpy(frame_bytes.data() + OFF_TAG, tag.data(), tag.size());
  return Status::Ok;
}

Status throughput_report(double rate_hz, uint64_t on_air_bytes, ThroughputReport& out) {
  if (!(rate_hz > 0) || on_air_bytes == 0) return Status::InvalidArg;
  out.bits_per_s = rate_hz * static_cast<double>(on_air_bytes) * 8.0;
  out.kbit_per_s = out.bits_per_s / 1000.0;
  out.kibit_per_s = out.bits_per_s / 1024.0;
  return Status::Ok;
}

}  // namespace mlink::wire

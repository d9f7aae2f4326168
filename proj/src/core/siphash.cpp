#include "core/siphash.hpp"

#include "core/bytes.hpp"

namespace mlink {

namespace {

inline uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

struct SipState {
  uint64_t v0, v1, v2, v3;

  void round() {
    v0 += v1;
    v1 = rotl(v1, 13);
    v1 ^= v0;
    v0 = rotl(v0, 32);
    v2 += v3;
    v3 = rotl(v3, 16);
    v3 ^= v2;
    v0 += v3;
    v3 = rotl(v3, 21);
    v3 ^= v0;
    v2 += v1;
    v1 = rotl(v1, 17);
    v1 ^= v2;
    v2 = rotl(v2, 32);
  }
};

}  // namespace

std::array<uint8_t, 16> siphash24_128(const std::array<uint8_t, 16>& key, const uint8_t* data,
                                      size_t len) {
  const uint64_t k0 = read_u64_le(key.data());
  const uint64_t k1 = read_u64_le(key.data() + 8);

  SipState s{0x736f6d6570736575ULL ^ k0, 0x646f72616e646f6dULL ^ k1, 0x6c7967656e657261ULL ^ k0,
             0x7465646279746573ULL ^ k1};
  s.v1 ^= 0xEE;  // 128-bit output variant

  const size_t full = len / 8;
  for (size_t i = 0; i < full; ++i) {
    const uint64_t m = read_u64_le(data + 8 * i);
    s.v3 ^= m;
    s.round();
    s.round();
    s.v0 ^= m;
  }

  uint64_t last = static_cast<uint64_t>(len & 0xFF) << 56;
  const uint8_t* tail = data + 8 * full;
  for (size_t i = 0; i < (len & 7); ++i) last |= static_cast<uint64_t>(tail[i]) << (8 * i);
  s.v3 ^= last;
  s.round();
  s.round();
  s.v0 ^= last;

  s.v2 ^= 0xEE;
  for (int i = 0; i < 4; ++i) s.round();
  const uint64_t h0 = s.v0 ^ s.v1 ^ s.v2 ^ s.v3;

  s.v1 ^= 0xDD;
  for (int i = 0; i < 4; ++i) s.round();
  const uint64_t h1 = s.v0 ^ s.v1 ^ s.v2 ^ s.v3;

  std::array<uint8_t, 16> out{};
  write_u64_le(out.data(), h0);
  write_u64_le(out.data() + 8, h1);
  return out;
}

}  // namespace mlink

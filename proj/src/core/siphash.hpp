#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace mlink {

// SipHash-2-4 with 128-bit output. Used as the keyed tag function of the
// null cipher (cipher_id 0): the payload stays in the clear and the 16-byte
// auth tag is SipHash-2-4-128(key, aad).
std::array<uint8_t, 16> siphash24_128(const std::array<uint8_t, 16>& key, const uint8_t* data,
                                      size_t len);

}  // namespace mlink

#pragma once

#include <cstddef>
#include <cstdint>

namespace mlink {

// CRC-32 (IEEE 802.3): reflected polynomial 0xEDB88320, init 0xFFFFFFFF,
// final XOR 0xFFFFFFFF. Matches zlib's crc32().
uint32_t crc32_ieee(const uint8_t* data, size_t len);

}  // namespace mlink

#pragma once

#include <vector>

#include "obf/pe/model.hpp"
#include "obf/rng.hpp"

namespace obf::actions {

inline constexpr std::size_t kXorKeyLength = 8;

// Placement of an encrypted payload inside a carrier PE.
struct XorStubLayout {
  int loop_count = 0;                // 1..3
  std::vector<Bytes> keys;           // loop_count keys, kXorKeyLength each
  std::size_t payload_offset = 0;    // ciphertext span within the carrier image
  std::size_t payload_length = 0;
};

// One XOR pass with a repeating key, in place. Involution: applying the
// same key twice is the identity.
void xor_pass(Bytes& data, ByteView key);

// Encrypts the whole original file image with `loops` successive XOR
// passes, each with a distinct rng-drawn 8-byte repeating key, and embeds
// keys + ciphertext in a freshly generated carrier PE. The carrier's loader
// section is an inert placeholder; it never executes anything.
pe::PeBinary xor_obfuscate(const pe::PeBinary& pe, int loops, Rng& rng);

// Test hook: explicit keys (loops = keys.size()).
pe::PeBinary xor_obfuscate_with_keys(const pe::PeBinary& pe, const std::vector<Bytes>& keys);

// Locates the stub layout inside a carrier; nullopt when absent.
std::optional<XorStubLayout> parse_stub_layout(const pe::PeBinary& carrier);

// Recovers the exact original payload bytes. Throws NotAStub.
Bytes decode_stub(const pe::PeBinary& carrier);

}  // namespace obf::actions

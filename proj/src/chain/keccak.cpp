/*
   Copyright 2026 The Chainharvest Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <chainharvest/chain/keccak.hpp>

#include <array>
#include <bit>
#include <cstring>

namespace chainharvest {

namespace {

    constexpr std::size_t kRate{136};  // 1600 - 2 * 256 bits, in bytes
    constexpr int kRounds{24};

    constexpr std::array<uint64_t, kRounds> kRoundConstants{
        0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
        0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
        0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
        0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
        0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
        0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
    };

    // Rotation offsets and lane permutation in pi-step visiting order.
    constexpr std::array<int, 24> kRho{1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14,
                                       27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
    constexpr std::array<int, 24> kPi{10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4,
                                      15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

    void keccak_f1600(std::array<uint64_t, 25>& a) noexcept {
        for (int round = 0; round < kRounds; ++round) {
            std::array<uint64_t, 5> c{};
            for (int x = 0; x < 5; ++x) {
                c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
            }
            for (int x = 0; x < 5; ++x) {
                const uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
                for (int y = 0; y < 25; y += 5) a[y + x] ^= d;
            }

            uint64_t carry = a[1];
            for (int i = 0; i < 24; ++i) {
                const int j = kPi[i];
                const uint64_t tmp = a[j];
                a[j] = std::rotl(carry, kRho[i]);
                carry = tmp;
            }

            for (int y = 0; y < 25; y += 5) {
                std::array<uint64_t, 5> row{};
                for (int x = 0; x < 5; ++x) row[x] = a[y + x];
                for (int x = 0; x < 5; ++x) {
                    a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
                }
            }

            a[0] ^= kRoundConstants[round];
        }
    }

    uint64_t load_le64(const uint8_t* p) noexcept {
        uint64_t v{0};
        for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
        return v;
    }

    void absorb_block(std::array<uint64_t, 25>& state, const uint8_t* block) noexcept {
        for (std::size_t i = 0; i < kRate / 8; ++i) {
            state[i] ^= load_le64(block + 8 * i);
        }
        keccak_f1600(state);
    }

}  // namespace

Hash32 keccak256(ByteView input) noexcept {
    std::array<uint64_t, 25> state{};

    std::size_t offset{0};
    while (input.size() - offset >= kRate) {
        absorb_block(state, input.data() + offset);
        offset += kRate;
    }

    std::array<uint8_t, kRate> last{};
    const std::size_t remaining = input.size() - offset;
    if (remaining > 0) {
        std::memcpy(last.data(), input.data() + offset, remaining);
    }
    last[remaining] ^= 0x01;
    last[kRate - 1] ^= 0x80;
    absorb_block(state, last.data());

    std::array<uint8_t, 32> digest{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t b = 0; b < 8; ++b) {
            digest[8 * i + b] = static_cast<uint8_t>(state[i] >> (8 * b));
        }
    }
    return Hash32{digest};
}

}  // namespace chainharvest

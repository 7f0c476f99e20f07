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

#pragma once

#include <string_view>

namespace chainharvest::test {

// Frozen from an independent ABI encoder (eth_abi + pycryptodome).
namespace reference {

    inline constexpr std::string_view kTransferOne =
        "0xa9059cbb00000000000000000000000000000000000000000000000000000000000000010000000000000000000000000000000000000000000000000000000000000001";

    inline constexpr std::string_view kStringAbc =
        "0x91e145ef000000000000000000000000000000000000000000000000000000000000002000000000000000000000000000000000000000000000000000000000000000036162630000000000000000000000000000000000000000000000000000000000";

    // execute([(0x11..11, 1 ether, 0x0102), (0x22..22, 0, 0x)])
    inline constexpr std::string_view kExecuteTuples =
        "0x3f707e6b00000000000000000000000000000000000000000000000000000000000000200000000000000000000000000000000000000000000000000000000000000002000000000000000000000000000000000000000000000000000000000000004000000000000000000000000000000000000000000000000000000000000000e000000000000000000000000011111111111111111111111111111111111111110000000000000000000000000000000000000000000000000de0b6b3a76400000000000000000000000000000000000000000000000000000000000000000060000000000000000000000000000000000000000000000000000000000000000201020000000000000000000000000000000000000000000000000000000000000000000000000000000000002222222222222222222222222222222222222222000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000600000000000000000000000000000000000000000000000000000000000000000";

    // swap(-5, [1,2,3], 0xabab..ab)
    inline constexpr std::string_view kSwapSigned =
        "0x24f8e5fafffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffb000000000000000000000000000000000000000000000000000000000000000100000000000000000000000000000000000000000000000000000000000000020000000000000000000000000000000000000000000000000000000000000003abababababababababababababababababababababababababababababababab";

    // multicall([0x01, bytes 0..39])
    inline constexpr std::string_view kMulticall =
        "0xac9650d80000000000000000000000000000000000000000000000000000000000000020000000000000000000000000000000000000000000000000000000000000000200000000000000000000000000000000000000000000000000000000000000400000000000000000000000000000000000000000000000000000000000000080000000000000000000000000000000000000000000000000000000000000000101000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000028000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f2021222324252627000000000000000000000000000000000000000000000000";

    // g([[1,2],[],[3]], ["x", "y" * 33], true)
    inline constexpr std::string_view kNested =
        "0xc31b1983000000000000000000000000000000000000000000000000000000000000006000000000000000000000000000000000000000000000000000000000000001a000000000000000000000000000000000000000000000000000000000000000010000000000000000000000000000000000000000000000000000000000000003000000000000000000000000000000000000000000000000000000000000006000000000000000000000000000000000000000000000000000000000000000c000000000000000000000000000000000000000000000000000000000000000e00000000000000000000000000000000000000000000000000000000000000002000000000000000000000000000000000000000000000000000000000000000100000000000000000000000000000000000000000000000000000000000000020000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000100000000000000000000000000000000000000000000000000000000000000030000000000000000000000000000000000000000000000000000000000000040000000000000000000000000000000000000000000000000000000000000008000000000000000000000000000000000000000000000000000000000000000017800000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000002179797979797979797979797979797979797979797979797979797979797979797900000000000000000000000000000000000000000000000000000000000000";

    // sha256("input.dat")
    inline constexpr std::string_view kInputDigest = "0x7276f9f9db7578df7470d893b25b11b35db54f58263eeee1e0cc458e7b1d2b1c";

    // logTask("run-42", "stage_in", sha256("input.dat"))
    inline constexpr std::string_view kLogTask =
        "0xac3e7f51000000000000000000000000000000000000000000000000000000000000006000000000000000000000000000000000000000000000000000000000000000a07276f9f9db7578df7470d893b25b11b35db54f58263eeee1e0cc458e7b1d2b1c000000000000000000000000000000000000000000000000000000000000000672756e2d34320000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000000873746167655f696e000000000000000000000000000000000000000000000000";

    // TaskLogged("run-42" indexed, "stage_in", digest): data section and topics
    inline constexpr std::string_view kTaskLoggedData =
        "0x00000000000000000000000000000000000000000000000000000000000000407276f9f9db7578df7470d893b25b11b35db54f58263eeee1e0cc458e7b1d2b1c000000000000000000000000000000000000000000000000000000000000000873746167655f696e000000000000000000000000000000000000000000000000";
    inline constexpr std::string_view kTaskLoggedTopic = "0xb2332819b04cc938c883a13d948527e58e54bd7e13280823c9d77b45e2e3d5fc";
    inline constexpr std::string_view kRunIdTopic = "0x42fd290b30e581ac6516579c741f06c127377f44c353d8d56042f577b9d1d3ee";

}  // namespace reference

}  // namespace chainharvest::test

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "persona/error.hpp"

namespace persona {

// The four binary axes, in the fixed reporting order.
enum class Axis : uint8_t { ei = 0, sn = 1, tf = 2, jp = 3 };

inline constexpr std::array<const char*, 4> kAxisNames = {"E/I", "S/N", "T/F", "J/P"};

// One MBTI label. Each axis stores 0 for the first letter (E, S, T, J) and
// 1 for the second (I, N, F, P).
struct MbtiLabel {
    uint8_t ei = 0;
    uint8_t sn = 0;
    uint8_t tf = 0;
    uint8_t jp = 0;

    uint8_t axis(Axis a) const {
        switch (a) {
            case Axis::ei: return ei;
            case Axis::sn: return sn;
            case Axis::tf: return tf;
            case Axis::jp: return jp;
        }
        return 0;
    }

    bool operator==(const MbtiLabel&) const = default;
};

// 4-character type code in the fixed axis order EI, SN, TF, JP.
std::string type_code(const MbtiLabel& label);

// Parses a 4-character type code; throws InputError on any unknown letter.
MbtiLabel parse_type_code(const std::string& code);

// 16-class index: 8*[I] + 4*[N] + 2*[F] + 1*[P].
int type16_index(const MbtiLabel& label);

// Inverse of type16_index; throws InputError for indices outside [0, 16).
MbtiLabel type16_label(int index);

}  // namespace persona

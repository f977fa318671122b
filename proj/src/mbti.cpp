#include "persona/mbti.hpp"

namespace persona {

namespace {

// Letter pairs per axis: index 0 letter first.
constexpr char kLetters[4][2] = {{'E', 'I'}, {'S', 'N'}, {'T', 'F'}, {'J', 'P'}};

uint8_t parse_letter(char c, int axis, const std::string& code) {
    char upper = (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
    if (upper == kLetters[axis][0]) return 0;
    if (upper == kLetters[axis][1]) return 1;
    throw InputError("invalid type code \"" + code + "\": letter '" + std::string(1, c) +
                     "' is not valid for axis " + kAxisNames[axis]);
}

}  // namespace

std::string type_code(const MbtiLabel& label) {
    std::string code(4, '?');
    code[0] = kLetters[0][label.ei];
    code[1] = kLetters[1][label.sn];
    code[2] = kLetters[2][label.tf];
    code[3] = kLetters[3][label.jp];
    return code;
}

MbtiLabel parse_type_code(const std::string& code) {
    if (code.size() != 4) {
        throw InputError("invalid type code \"" + code + "\": expected 4 characters");
    }
    MbtiLabel label;
    label.ei = parse_letter(code[0], 0, code);
    label.sn = parse_letter(code[1], 1, code);
    label.tf = parse_letter(code[2], 2, code);
    label.jp = parse_letter(code[3], 3, code);
    return label;
}

int type16_index(const MbtiLabel& label) {
    return 8 * label.ei + 4 * label.sn + 2 * label.tf + 1 * label.jp;
}

MbtiLabel type16_label(int index) {
    if (index < 0 || index >= 16) {
        throw InputError("type16 index " + std::to_string(index) + " outside [0, 16)");
    }
    MbtiLabel label;
    label.ei = static_cast<uint8_t>((index >> 3) & 1);
    label.sn = static_cast<uint8_t>((index >> 2) & 1);
    label.tf = static_cast<uint8_t>((index >> 1) & 1);
    label.jp = static_cast<uint8_t>(index & 1);
    return label;
}

}  // namespace persona

#pragma once

#include <string>
#include <string_view>

namespace diactk::utf8 {

// Decodes UTF-8 into a codepoint sequence. Malformed input throws
// std::invalid_argument naming the byte offset.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view codepoints);
std::string encode(char32_t cp);

}  // namespace diactk::utf8

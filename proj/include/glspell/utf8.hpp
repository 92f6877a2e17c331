#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace glspell::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the code point starting at `pos` and advances `pos` past it.
// Malformed sequences yield kReplacement and consume one byte.
char32_t next(std::string_view text, std::size_t& pos) noexcept;

std::u32string decode(std::string_view text);
void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

// True if every byte sequence in `text` is well-formed UTF-8.
bool valid(std::string_view text) noexcept;

}  // namespace glspell::utf8

#include "corpusclean/core.hpp"

#include <unicode/bytestream.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <array>
#include <string>

namespace corpusclean {

namespace {

enum AsciiClass : std::uint8_t {
  kOther = 0,
  kLetter = 1,
  kSpace = 2,
  kPunct = 4,
};

constexpr std::array<std::uint8_t, 128> make_ascii_table() {
  std::array<std::uint8_t, 128> t{};
  for (int c = 'a'; c <= 'z'; ++c) t[c] = kLetter;
  for (int c = 'A'; c <= 'Z'; ++c) t[c] = kLetter;
  for (int c = 0x09; c <= 0x0d; ++c) t[c] = kSpace;
  t[' '] = kSpace;
  // General category P* in the ASCII range. '$', '+', '<', '=', '>', '^', '`',
  // '|', '~' are symbols (S*), not punctuation.
  for (char c : std::string_view("!\"#%&'()*,-./:;?@[\\]_{}")) {
    t[static_cast<unsigned char>(c)] = kPunct;
  }
  return t;
}

constexpr auto kAscii = make_ascii_table();

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
      throw std::runtime_error(std::string("ICU NFC unavailable: ") + u_errorName(status));
    }
    return n;
  }();
  return *instance;
}

// Returns the byte offset of the first ill-formed sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s, bool& any_non_ascii) {
  any_non_ascii = false;
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto n = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < n) {
    if (p[i] < 0x80) {
      ++i;
      continue;
    }
    any_non_ascii = true;
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::string_view::npos;
}

// Walks a valid UTF-8 string code point by code point.
template <typename Fn>
void for_each_cp(std::string_view s, Fn&& fn) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto n = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < n) {
    const std::int32_t start = i;
    UChar32 c;
    if (p[i] < 0x80) {
      c = p[i++];
    } else {
      U8_NEXT_OR_FFFD(p, i, n, c);
    }
    fn(static_cast<char32_t>(c), static_cast<std::size_t>(start), static_cast<std::size_t>(i));
  }
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for_each_cp(s, [&](char32_t cp, std::size_t b, std::size_t e) {
    if (is_whitespace(cp)) {
      pending_space = true;
      return;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(b, e - b));
  });
  return out;
}

struct Chunk {
  std::size_t begin;
  std::size_t end;
};

// Calls fn(token_begin, token_end) for every token of `text`.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::vector<Chunk> cps;  // per-code-point byte ranges of the current chunk
  auto flush = [&] {
    if (cps.empty()) return;
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    auto punct_at = [&](std::size_t k) {
      UChar32 c;
      std::int32_t i = static_cast<std::int32_t>(cps[k].begin);
      U8_NEXT_OR_FFFD(reinterpret_cast<const std::uint8_t*>(text.data()), i,
                      static_cast<std::int32_t>(text.size()), c);
      return is_punctuation(static_cast<char32_t>(c));
    };
    while (lo < hi && punct_at(lo)) {
      fn(cps[lo].begin, cps[lo].end);
      ++lo;
    }
    std::size_t trailing_from = hi;
    while (trailing_from > lo && punct_at(trailing_from - 1)) --trailing_from;
    if (lo < trailing_from) fn(cps[lo].begin, cps[trailing_from - 1].end);
    for (std::size_t k = trailing_from; k < hi; ++k) fn(cps[k].begin, cps[k].end);
    cps.clear();
  };
  for_each_cp(text, [&](char32_t cp, std::size_t b, std::size_t e) {
    if (is_whitespace(cp)) {
      flush();
    } else {
      cps.push_back({b, e});
    }
  });
  flush();
}

}  // namespace

bool is_letter(char32_t cp) {
  if (cp < 0x80) return kAscii[cp] == kLetter;
  return (U_MASK(u_charType(static_cast<UChar32>(cp))) & U_GC_L_MASK) != 0;
}

bool is_whitespace(char32_t cp) {
  if (cp < 0x80) return kAscii[cp] == kSpace;
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_punctuation(char32_t cp) {
  if (cp < 0x80) return kAscii[cp] == kPunct;
  return (U_MASK(u_charType(static_cast<UChar32>(cp))) & U_GC_P_MASK) != 0;
}

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  return static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
}

void decode_utf8(std::string_view text, std::vector<char32_t>& out) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto n = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < n) {
    if (p[i] < 0x80) {
      out.push_back(p[i++]);
      continue;
    }
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) {
      throw DecodeError(static_cast<std::size_t>(start),
                        "invalid UTF-8 at byte offset " + std::to_string(start));
    }
    out.push_back(static_cast<char32_t>(c));
  }
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
    return;
  }
  std::uint8_t buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
  if (error) {
    append_utf8(out, U'\uFFFD');
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::string scrub_utf8(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for_each_cp(raw, [&](char32_t cp, std::size_t b, std::size_t e) {
    if (cp == U'\uFFFD') {
      append_utf8(out, cp);
    } else {
      out.append(raw.substr(b, e - b));
    }
  });
  return out;
}

std::string normalize_line(std::string_view raw) {
  bool non_ascii = false;
  const std::size_t bad = find_invalid_utf8(raw, non_ascii);
  if (bad != std::string_view::npos) {
    throw DecodeError(bad, "invalid UTF-8 at byte offset " + std::to_string(bad));
  }
  if (!non_ascii) return collapse_whitespace(raw);

  const icu::Normalizer2& norm = nfc();
  UErrorCode status = U_ZERO_ERROR;
  const icu::StringPiece piece(raw.data(), static_cast<std::int32_t>(raw.size()));
  if (norm.isNormalizedUTF8(piece, status) && U_SUCCESS(status)) {
    return collapse_whitespace(raw);
  }
  status = U_ZERO_ERROR;
  std::string composed;
  icu::StringByteSink<std::string> sink(&composed, static_cast<std::int32_t>(raw.size()));
  norm.normalizeUTF8(0, piece, sink, nullptr, status);
  if (U_FAILURE(status)) {
    throw DecodeError(0, std::string("NFC normalization failed: ") + u_errorName(status));
  }
  return collapse_whitespace(composed);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for_each_token(text, [&](std::size_t b, std::size_t e) {
    tokens.emplace_back(text.substr(b, e - b));
  });
  return tokens;
}

std::size_t count_tokens(std::string_view text) {
  std::size_t n = 0;
  for_each_token(text, [&](std::size_t, std::size_t) { ++n; });
  return n;
}

AlphaCount count_alpha(std::string_view text) {
  AlphaCount count;
  for_each_cp(text, [&](char32_t cp, std::size_t, std::size_t) {
    if (is_whitespace(cp)) return;
    if (is_letter(cp)) {
      ++count.alpha;
    } else {
      ++count.non_alpha;
    }
  });
  return count;
}

}  // namespace corpusclean

// Text primitives shared by every filter: line normalization, tokenization,
// alphabetic counting and pair fingerprinting.
//
// All functions here are pure and safe to call from any number of threads.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace corpusclean {

/// One input line after normalization, with its 1-based position in the file.
struct Sentence {
  std::string text;
  std::uint64_t line_no = 1;
};

/// A line-aligned source/target pair. Both sides carry the same line number.
struct SentencePair {
  Sentence src;
  Sentence tgt;
};

struct AlphaCount {
  std::size_t alpha = 0;      // code points with general category L*
  std::size_t non_alpha = 0;  // every other non-whitespace code point

  std::size_t total() const { return alpha + non_alpha; }
  friend bool operator==(const AlphaCount&, const AlphaCount&) = default;
};

/// Raised for input that is not well-formed UTF-8.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t byte_offset, const std::string& what)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Trims, collapses interior whitespace runs to one U+0020 and applies NFC.
/// Throws DecodeError on malformed UTF-8.
std::string normalize_line(std::string_view raw);

/// Splits on whitespace, then peels leading and trailing punctuation off each
/// chunk as single-code-point tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Number of tokens tokenize() would return, without allocating them.
std::size_t count_tokens(std::string_view text);

AlphaCount count_alpha(std::string_view text);

/// Replaces every ill-formed UTF-8 subsequence with U+FFFD.
std::string scrub_utf8(std::string_view raw);

// ---------------------------------------------------------------------------
// Unicode helpers (code point level)

bool is_letter(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);
char32_t to_lower(char32_t cp);

/// Decodes valid UTF-8 into code points, appending to `out`.
/// Throws DecodeError on malformed input.
void decode_utf8(std::string_view text, std::vector<char32_t>& out);
void append_utf8(std::string& out, char32_t cp);

// ---------------------------------------------------------------------------
// Fingerprints

struct Digest128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend bool operator==(const Digest128&, const Digest128&) = default;
  friend auto operator<=>(const Digest128&, const Digest128&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const Digest128& d) {
    return H::combine(std::move(h), d.lo, d.hi);
  }
};

/// MurmurHash3 x64-128 over a byte string. Seed 0 unless given.
Digest128 murmur3_128(std::string_view bytes, std::uint32_t seed = 0);

/// Hash over the length-prefixed concatenation of `parts`: each part
/// contributes an 8-byte little-endian length followed by its bytes.
Digest128 fingerprint(std::span<const std::string_view> parts);
Digest128 fingerprint(std::initializer_list<std::string_view> parts);

/// The exact byte string fingerprint() hashes. Used as a key when exact
/// verification is requested.
std::string fingerprint_key(std::span<const std::string_view> parts);
std::string fingerprint_key(std::initializer_list<std::string_view> parts);

}  // namespace corpusclean

template <>
struct std::hash<corpusclean::Digest128> {
  std::size_t operator()(const corpusclean::Digest128& d) const noexcept {
    return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL));
  }
};

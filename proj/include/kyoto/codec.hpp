#pragma once

// Text codec for matrices: "H W <base64>", where the payload is the row-major
// bit string padded with zeros to whole bytes, first bit in the least
// significant position of each byte.

#include "kyoto/core.hpp"

#include <array>
#include <charconv>
#include <string>
#include <string_view>

namespace kyoto {

enum class ParseErrorKind { header, base64, padding, length };

class ParseError : public Error {
public:
  ParseError(ParseErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }

private:
  ParseErrorKind kind_;
};

namespace detail {

inline constexpr std::string_view base64_alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline int base64_value(char c) {
  if (c >= 'A' && c <= 'Z')
    return c - 'A';
  if (c >= 'a' && c <= 'z')
    return c - 'a' + 26;
  if (c >= '0' && c <= '9')
    return c - '0' + 52;
  if (c == '+')
    return 62;
  if (c == '/')
    return 63;
  return -1;
}

inline std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += base64_alphabet[(v >> 18) & 63];
    out += base64_alphabet[(v >> 12) & 63];
    out += base64_alphabet[(v >> 6) & 63];
    out += base64_alphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = bytes[i] << 16;
    out += base64_alphabet[(v >> 18) & 63];
    out += base64_alphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += base64_alphabet[(v >> 18) & 63];
    out += base64_alphabet[(v >> 12) & 63];
    out += base64_alphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

/// Strict decoder: padded, canonical (unused trailing bits zero), no whitespace.
inline std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0)
    throw ParseError(ParseErrorKind::base64, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    std::array<int, 4> v{};
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=') {
        if (!last || k < 2)
          throw ParseError(ParseErrorKind::base64, "misplaced base64 padding");
        ++pad;
        v[k] = 0;
        continue;
      }
      if (pad > 0)
        throw ParseError(ParseErrorKind::base64, "data after base64 padding");
      v[k] = base64_value(c);
      if (v[k] < 0)
        throw ParseError(ParseErrorKind::base64, std::string("invalid base64 character '") + c + "'");
    }
    const unsigned word = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    if ((pad == 1 && (word & 0xFF) != 0) || (pad == 2 && (word & 0xFFFF) != 0))
      throw ParseError(ParseErrorKind::base64, "non-canonical base64 trailing bits");
    out.push_back(static_cast<std::uint8_t>(word >> 16));
    if (pad < 2)
      out.push_back(static_cast<std::uint8_t>(word >> 8));
    if (pad < 1)
      out.push_back(static_cast<std::uint8_t>(word));
  }
  return out;
}

inline int parse_dimension(std::string_view tok) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value <= 0 || tok.front() == '0')
    throw ParseError(ParseErrorKind::header, "bad matrix dimension '" + std::string(tok) + "'");
  return value;
}

}  // namespace detail

inline std::string encode_matrix(const BitMatrix& mat) {
  const auto bits = mat.bits();
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k])
      bytes[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
  return std::to_string(mat.rows()) + " " + std::to_string(mat.cols()) + " " +
         detail::base64_encode(bytes);
}

inline BitMatrix decode_matrix(std::string_view code) {
  const auto s1 = code.find(' ');
  if (s1 == std::string_view::npos)
    throw ParseError(ParseErrorKind::header, "expected \"H W payload\"");
  const auto s2 = code.find(' ', s1 + 1);
  if (s2 == std::string_view::npos)
    throw ParseError(ParseErrorKind::header, "expected \"H W payload\"");
  if (s1 == 0 || s2 == s1 + 1)
    throw ParseError(ParseErrorKind::header, "empty dimension field");
  const int rows = detail::parse_dimension(code.substr(0, s1));
  const int cols = detail::parse_dimension(code.substr(s1 + 1, s2 - s1 - 1));
  const auto payload = code.substr(s2 + 1);
  if (payload.find_first_of(" \t\r\n") != std::string_view::npos)
    throw ParseError(ParseErrorKind::header, "unexpected whitespace in payload");

  const auto bytes = detail::base64_decode(payload);
  const std::size_t nbits = static_cast<std::size_t>(rows) * cols;
  if (bytes.size() != (nbits + 7) / 8)
    throw ParseError(ParseErrorKind::length, "payload has " + std::to_string(bytes.size()) +
                                                 " bytes, expected " + std::to_string((nbits + 7) / 8));
  std::vector<std::uint8_t> bits(nbits);
  for (std::size_t k = 0; k < nbits; ++k)
    bits[k] = (bytes[k / 8] >> (k % 8)) & 1u;
  for (std::size_t k = nbits; k < bytes.size() * 8; ++k)
    if ((bytes[k / 8] >> (k % 8)) & 1u)
      throw ParseError(ParseErrorKind::padding, "nonzero padding bits");
  return BitMatrix(rows, cols, std::move(bits));
}

}  // namespace kyoto

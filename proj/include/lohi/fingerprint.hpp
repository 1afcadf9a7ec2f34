#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lohi/error.hpp"

namespace lohi {

// Fixed-width binary fingerprint stored as 64-bit words. Bits beyond the
// width in the last word are always zero, so whole-word popcounts are exact.
class Fingerprint {
 public:
  Fingerprint() = default;

  explicit Fingerprint(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t width() const noexcept { return nbits_; }
  std::size_t popcount() const noexcept { return popcount_; }
  bool empty() const noexcept { return popcount_ == 0; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t bit) const {
    check(bit);
    return (words_[bit / 64] >> (bit % 64)) & 1u;
  }

  void set(std::size_t bit) {
    check(bit);
    std::uint64_t& w = words_[bit / 64];
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if ((w & mask) == 0) {
      w |= mask;
      ++popcount_;
    }
  }

  void reset(std::size_t bit) {
    check(bit);
    std::uint64_t& w = words_[bit / 64];
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if (w & mask) {
      w &= ~mask;
      --popcount_;
    }
  }

  std::vector<std::size_t> on_bits() const {
    std::vector<std::size_t> out;
    out.reserve(popcount_);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  // Lowercase hex, nbits/4 digits. Digit i holds bits 4i..4i+3 with bit 4i as
  // the most significant bit of the digit.
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(nbits_ / 4, '0');
    for (std::size_t d = 0; d < out.size(); ++d) {
      unsigned v = 0;
      for (std::size_t j = 0; j < 4; ++j) v = (v << 1) | (test(4 * d + j) ? 1u : 0u);
      out[d] = kDigits[v];
    }
    return out;
  }

  static Fingerprint from_hex(std::string_view hex) {
    if (hex.empty()) throw InputError("empty fingerprint hex string");
    Fingerprint fp(hex.size() * 4);
    for (std::size_t d = 0; d < hex.size(); ++d) {
      const char c = hex[d];
      unsigned v;
      if (c >= '0' && c <= '9') {
        v = static_cast<unsigned>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        v = static_cast<unsigned>(c - 'a' + 10);
      } else {
        throw InputError(std::string("invalid fingerprint hex digit '") + c + "'");
      }
      for (std::size_t j = 0; j < 4; ++j) {
        if (v & (8u >> j)) fp.set(4 * d + j);
      }
    }
    return fp;
  }

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }

 private:
  void check(std::size_t bit) const {
    if (bit >= nbits_) throw std::out_of_range("fingerprint bit index out of range");
  }

  std::size_t nbits_ = 0;
  std::size_t popcount_ = 0;
  std::vector<std::uint64_t> words_;
};

// Intersection and union bit counts of two equal-width fingerprints.
struct OverlapCounts {
  std::size_t intersection = 0;
  std::size_t union_ = 0;
};

inline OverlapCounts overlap_counts(const Fingerprint& a, const Fingerprint& b) {
  if (a.width() != b.width()) {
    throw InputError("fingerprint width mismatch: " + std::to_string(a.width()) + " vs " +
                     std::to_string(b.width()));
  }
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t inter = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) inter += std::popcount(wa[i] & wb[i]);
  return {inter, a.popcount() + b.popcount() - inter};
}

// |a & b| / |a | b|; zero when both fingerprints are empty.
inline double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  const auto c = overlap_counts(a, b);
  if (c.union_ == 0) return 0.0;
  return static_cast<double>(c.intersection) / static_cast<double>(c.union_);
}

}  // namespace lohi

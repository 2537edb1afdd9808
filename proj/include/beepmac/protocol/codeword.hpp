#pragma once

#include <beepmac/core.hpp>

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace beepmac {

/// Self-delimiting transform of a value: each binary digit b of the value
/// (most significant first) becomes the pair (b, !b), and the pair (1,1)
/// terminates the word. No codeword is a prefix of another.
///
/// Symbols are computed on demand.
class Codeword {
 public:
  explicit constexpr Codeword(Value val) noexcept : value_(val), digits_(bit_length(val)) {}

  /// Number of binary digits of val, with 0 taking one digit.
  static constexpr int bit_length(Value val) noexcept { return val == 0 ? 1 : static_cast<int>(std::bit_width(val)); }

  /// Codeword length, 2*bit_length(val) + 2.
  static constexpr int length_for(Value val) noexcept { return 2 * bit_length(val) + 2; }

  constexpr Value value() const noexcept { return value_; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(2 * digits_ + 2); }

  /// 1-based symbol c_i.
  constexpr bool symbol(std::size_t i) const {
    if (i == 0 || i > size()) throw std::out_of_range("codeword symbol index out of range");
    if (i > static_cast<std::size_t>(2 * digits_)) return true;
    const auto digit = static_cast<int>((i + 1) / 2);  // 1 = most significant
    const bool a = (value_ >> (digits_ - digit)) & 1U;
    return (i % 2 == 1) ? a : !a;
  }

  std::vector<bool> bits() const {
    std::vector<bool> out;
    out.reserve(size());
    for (std::size_t i = 1; i <= size(); ++i) out.push_back(symbol(i));
    return out;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 1; i <= size(); ++i) s += symbol(i) ? '1' : '0';
    return s;
  }

  friend constexpr bool operator==(const Codeword&, const Codeword&) = default;
  friend constexpr auto operator<=>(const Codeword&, const Codeword&) = default;

 private:
  Value value_;
  int digits_;
};

inline constexpr Codeword transform_input(Value val) noexcept { return Codeword(val); }

/// Classification of a block's beep count: none, exactly one, or several.
enum class BlockCount : std::uint8_t { Zero, One, Many };

inline constexpr BlockCount classify_block(std::uint64_t count) noexcept {
  return count == 0 ? BlockCount::Zero : count == 1 ? BlockCount::One : BlockCount::Many;
}

}  // namespace beepmac

#pragma once

#include <cstdint>
#include <string>

namespace gtcurate {

// A percentage held as integer hundredths, rounded half-up. 21.84% is 2184.
struct Percent {
  std::int64_t hundredths = 0;

  /// part/whole in percent; 0/0 is 0.00.
  static constexpr Percent of(std::uint64_t part, std::uint64_t whole) noexcept {
    if (whole == 0) return {0};
    // round(part * 10000 / whole), halves rounded up
    const unsigned __int128 num = static_cast<unsigned __int128>(part) * 20000u + whole;
    return {static_cast<std::int64_t>(num / (static_cast<unsigned __int128>(whole) * 2u))};
  }

  double value() const noexcept { return static_cast<double>(hundredths) / 100.0; }

  /// "21.84"
  std::string str() const {
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(hundredths / 100) + "." + frac;
  }

  friend constexpr bool operator==(Percent, Percent) = default;
};

}  // namespace gtcurate

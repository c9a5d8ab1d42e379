#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace iocoh {

// Grammar (case-insensitive, optional whitespace before the suffix):
//   size      := number [ B | K | KiB | M | MiB | G | GiB | KB | MB | GB ]
//                K/M/G and the *iB forms are binary; KB/MB/GB are decimal.
//   frequency := number [ Hz | kHz | MHz | GHz ]
//   duration  := number [ s | ms | us | ns ]
//   range     := size ".." size   (powers of two from lo to hi inclusive)
// "number" may carry a fraction or exponent ("1.5M", "3e8"). All parsers
// throw std::invalid_argument with the offending text.

std::uint64_t parse_size(std::string_view text);
std::uint64_t parse_frequency(std::string_view text);
double parse_duration(std::string_view text);

/// Comma-separated list of sizes and/or ranges: "4K..32M", "4K,64K,1M".
std::vector<std::uint64_t> parse_size_list(std::string_view text);

/// Compact binary-suffixed form used in reports: 4096 -> "4K", 1048576 -> "1M".
std::string format_size(std::uint64_t bytes);

}  // namespace iocoh

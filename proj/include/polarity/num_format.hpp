#ifndef POLARITY_NUM_FORMAT_HPP
#define POLARITY_NUM_FORMAT_HPP

#include <charconv>
#include <string>

namespace polarity {

// Shortest round-trip decimal form; keeps CSV resume paths bit-exact.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace polarity

#endif  // POLARITY_NUM_FORMAT_HPP

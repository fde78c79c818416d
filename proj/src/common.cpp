#include "revsurf/common.hpp"

#include <charconv>

namespace revsurf {

std::string format_double(double v) {
  // std::to_chars with no precision argument emits the shortest string
  // that parses back to the same double.
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace revsurf

#include "valint/error.hpp"

namespace valint {

std::string code_string(ErrorCode code) {
  int v = static_cast<int>(code);
  std::string digits = std::to_string(v);
  while (digits.size() < 3) digits = "0" + digits;
  return "E" + digits;
}

}  // namespace valint

#include "qmb/config.hpp"

#include <cstdlib>
#include <string>

namespace qmb {

Limits limits_from_env() {
  Limits l;
  if (const char* raw = std::getenv("QMB_BUDGET")) {
    try {
      const long long v = std::stoll(raw);
      if (v > 0) l.tensor_budget = static_cast<std::size_t>(v);
    } catch (...) {
      // leave the default in place on unparseable input
    }
  }
  return l;
}

}  // namespace qmb

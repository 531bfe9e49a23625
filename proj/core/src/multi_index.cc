#include "mixrec/multi_index.h"

#include <sstream>

namespace mixrec {

std::string ToString(const MultiIndex& v) {
  std::ostringstream os;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) os << ',';
    os << v[j];
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& v) {
  return os << '(' << ToString(v) << ')';
}

}  // namespace mixrec

#include "balanced/errors.hpp"

namespace balanced {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NumericalDomain: return "numerical-domain";
    case ErrorKind::DegenerateDensity: return "degenerate-density";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Construction: return "construction";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace balanced

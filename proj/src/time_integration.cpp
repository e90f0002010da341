#include "swe/time_integration.hpp"

namespace swe {

Scheme default_scheme(int degree) {
  switch (degree) {
    case 1: return Scheme::SspRk2;
    case 2: return Scheme::SspRk3;
    default: return Scheme::Rk4;
  }
}

double default_cfl(int degree) {
  switch (degree) {
    case 1: return 0.25;
    case 2: return 0.15;
    default: return 0.1;
  }
}

Scheme parse_scheme(const std::string& name) {
  if (name == "ssp-rk2") return Scheme::SspRk2;
  if (name == "ssp-rk3") return Scheme::SspRk3;
  if (name == "rk4") return Scheme::Rk4;
  raise(ErrorKind::Usage, "unknown time scheme '" + name + "' (expected ssp-rk2, ssp-rk3 or rk4)");
}

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::SspRk2: return "ssp-rk2";
    case Scheme::SspRk3: return "ssp-rk3";
    case Scheme::Rk4: return "rk4";
  }
  return "unknown";
}

}  // namespace swe

#include "coevo/errors.hpp"

#include <sstream>

namespace coevo {

namespace {

std::string describe(const char* head, double a, const char* mid, double b) {
  std::ostringstream os;
  os.precision(17);
  os << head << a << mid << b;
  return os.str();
}

}  // namespace

NotCommuting::NotCommuting(double defect, double tol)
    : Error(describe("matrices do not commute: defect ", defect, " exceeds tolerance ", tol)),
      defect_(defect),
      tol_(tol) {}

SingularY::SingularY(double t, double pivot)
    : Singular(describe("Y(t) is singular at t = ", t, " (pivot ", pivot) + ")", pivot), t_(t) {}

ModeSingular::ModeSingular(std::size_t mode, double t, double t_star)
    : Error("mode " + std::to_string(mode) +
            describe(" is singular: t = ", t, " is at or past its blow-up time ", t_star)),
      mode_(mode),
      t_(t),
      t_star_(t_star) {}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& msg)
    : Error(source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

}  // namespace coevo

#include "zgreen/errors.hpp"

#include <sstream>

namespace zgreen {

namespace {

std::string circle_message(std::complex<double> mu) {
  std::ostringstream os;
  os << "tail eigenvalue " << mu.real();
  if (mu.imag() != 0.0) os << (mu.imag() < 0 ? " - " : " + ") << std::abs(mu.imag()) << "i";
  os << " lies on the unit circle within gap tolerance; no exponential dichotomy";
  return os.str();
}

}  // namespace

UnitCircleEigenvalue::UnitCircleEigenvalue(std::complex<double> mu)
    : Error(circle_message(mu)), eigenvalue(mu) {}

InfeasibleTruncation::InfeasibleTruncation(double res)
    : Error("truncated problem is infeasible: least-squares residual " + std::to_string(res)),
      residual(res) {}

VerificationFailure::VerificationFailure(std::string which, const std::string& detail)
    : Error("verification failed [" + which + "]: " + detail), check(std::move(which)) {}

}  // namespace zgreen

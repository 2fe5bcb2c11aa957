#include "fts/errors.hpp"

#include <sstream>

namespace fts {

namespace {

std::string describe(const char* what, double t, double bandwidth)
{
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t << " (bandwidth " << bandwidth << ")";
  return os.str();
}

} // namespace

SingularFit::SingularFit(double t, double bandwidth)
  : NumericError(describe("singular local linear fit", t, bandwidth))
  , t_(t)
  , bandwidth_(bandwidth)
{}

EmptyWindow::EmptyWindow(double t, double bandwidth)
  : NumericError(describe("empty kernel window", t, bandwidth))
  , t_(t)
{}

} // namespace fts

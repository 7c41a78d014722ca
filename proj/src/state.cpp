#include "slwave/state.hpp"

#include <cmath>
#include <stdexcept>

namespace slwave {

HhtParams::HhtParams(double alpha, double dt)
    : alpha_(alpha), beta_(0.25 * (1.0 - alpha) * (1.0 - alpha)), gamma_(0.5 - alpha), dt_(dt) {
  if (!(alpha >= -1.0 / 3.0 && alpha <= 0.0))
    throw std::invalid_argument("time.alpha must lie in [-1/3, 0]");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time.dt must be > 0");
}

}  // namespace slwave

#include "thermoplast/tensors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace thermoplast {

ElasticityTensor::ElasticityTensor(double lame_first, double lame_second)
    : lame_first_(lame_first), lame_second_(lame_second) {
  if (!(lame_second > 0.0)) {
    throw std::invalid_argument("elasticity: lame_second must be positive, got " + std::to_string(lame_second));
  }
  if (!(lame_first > -2.0 / 3.0 * lame_second)) {
    throw std::invalid_argument("elasticity: lame_first must exceed -(2/3) lame_second, got " +
                                std::to_string(lame_first));
  }
}

double ElasticityTensor::coercivity() const {
  return std::min(2.0 * lame_second_, 2.0 * lame_second_ + 3.0 * lame_first_);
}

}  // namespace thermoplast

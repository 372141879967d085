#include "boxverify/box.hpp"

#include <cmath>
#include <stdexcept>

namespace boxverify {

void Box::validate() const {
    if (lo.size() != hi.size())
        throw std::invalid_argument("box lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
            throw std::invalid_argument("box bounds must be finite");
        if (lo[i] > hi[i])
            throw std::invalid_argument("box has lo > hi");
    }
}

}  // namespace boxverify

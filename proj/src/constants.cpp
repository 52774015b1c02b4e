#include "cntrap/constants.hpp"

namespace cntrap::constants {

const PhysicalConstants& table() {
    static const PhysicalConstants t{};
    return t;
}

}  // namespace cntrap::constants

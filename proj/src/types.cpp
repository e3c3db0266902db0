#include "rmab/types.hpp"

#include <cmath>
#include <sstream>

namespace rmab {

void TransitionModel::validate() const {
    for (int s = 0; s < 2; ++s) {
        for (int a = 0; a < 2; ++a) {
            const double p = p_[s][a];
            if (!(p >= 0.0 && p <= 1.0)) {
                std::ostringstream msg;
                msg << "transition probability p(" << s << "," << a << ") = " << p
                    << " outside [0, 1]";
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

} // namespace rmab

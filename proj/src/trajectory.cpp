#include "sharpsa/trajectory.hpp"

#include <cmath>

namespace sharpsa {

bool RecordPolicy::records(long t) const {
    if (final_only) return false;
    if (t <= dense_until) return true;
    // Geometric grid: t is recorded iff it is the first integer at or past
    // some checkpoint. Recomputing from the grid keeps the decision a pure
    // function of t, so thinning matches across replications.
    double c = static_cast<double>(dense_until);
    while (c < static_cast<double>(t)) {
        double next = std::floor(c * growth) + 1.0;
        if (next <= c) next = c + 1.0;
        c = next;
    }
    return static_cast<long>(c) == t;
}

long RecordPolicy::next_checkpoint(long t) const {
    if (t < dense_until) return t + 1;
    double c = static_cast<double>(t);
    double next = std::floor(c * growth) + 1.0;
    if (next <= c) next = c + 1.0;
    return static_cast<long>(next);
}

}  // namespace sharpsa

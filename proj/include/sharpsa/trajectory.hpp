#pragma once

#include <vector>

#include "sharpsa/vec.hpp"

namespace sharpsa {

struct TrajPoint {
    long t;
    double alpha;
    double gap;   // l(x_t) - opt_value, NaN when the optimum value is unknown
    double dist;  // d(x_t, X*), NaN when no optimum oracle exists
    bool nontrivial_projection;
};

/// Controls which iterations are recorded. Counters and the final iterate
/// are exact regardless of thinning.
struct RecordPolicy {
    bool final_only = false;
    long dense_until = 1000;  // record every step below this t
    double growth = 1.1;      // then geometrically spaced checkpoints

    bool records(long t) const;
    long next_checkpoint(long t) const;
};

struct Trajectory {
    std::vector<TrajPoint> points;
    Vec final_x;
    long iters = 0;
    long nontrivial_projections = 0;
    long last_nontrivial_t = -1;
    long degenerate_clips = 0;  // importance-sampling clip fallbacks
};

}  // namespace sharpsa

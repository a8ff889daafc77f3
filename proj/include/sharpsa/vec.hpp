#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace sharpsa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline bool all_finite(const Vec& x) { return x.allFinite(); }

/// Throws if any coordinate is NaN or infinite. Trajectories must never
/// carry non-finite iterates, so algorithm drivers call this on every state.
inline void require_finite(const Vec& x, const char* where) {
    if (!x.allFinite()) {
        throw std::domain_error(std::string("non-finite vector in ") + where);
    }
}

inline void require_dim(const Vec& x, Eigen::Index d, const char* where) {
    if (x.size() != d) {
        throw std::invalid_argument(std::string("dimension mismatch in ") + where);
    }
}

}  // namespace sharpsa

#include "sharpsa/projections.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sharpsa/errors.hpp"

namespace sharpsa {

BoxPiece::BoxPiece(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box: lo/hi dimension mismatch");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!(lo[i] <= hi[i])) throw std::invalid_argument("box: lo must not exceed hi");
    }
}

BallPiece::BallPiece(Vec center_, double radius_) : center(std::move(center_)), radius(radius_) {
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
}

HalfspacePiece::HalfspacePiece(Vec normal_, double offset_)
    : normal(std::move(normal_)), offset(offset_) {
    if (normal.norm() <= 0.0) throw std::invalid_argument("halfspace: zero normal");
}

AffineEqPiece::AffineEqPiece(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() != b_.size()) throw std::invalid_argument("affine: A/b dimension mismatch");
    Eigen::ColPivHouseholderQR<Mat> qr(A_);
    if (qr.rank() < A_.rows()) throw std::invalid_argument("affine: rows of A are linearly dependent");
    llt_.compute(A_ * A_.transpose());
    if (llt_.info() != Eigen::Success) throw std::invalid_argument("affine: A A' not positive definite");
    Eigen::Index nnz = (A_.array() != 0.0).count();
    if (A_.size() >= 4096 && nnz * 4 < A_.size()) {
        sparse_ = A_.sparseView();
        sparse_.makeCompressed();
        use_sparse_ = true;
    }
}

Vec AffineEqPiece::residual_vec(const Vec& x) const {
    if (use_sparse_) return sparse_ * x - b_;
    return A_ * x - b_;
}

Vec AffineEqPiece::project(const Vec& x) const {
    Vec y = llt_.solve(residual_vec(x));
    if (use_sparse_) return x - sparse_.transpose() * y;
    return x - A_.transpose() * y;
}

double AffineEqPiece::residual(const Vec& x) const {
    return residual_vec(x).lpNorm<Eigen::Infinity>();
}

SimplexPiece::SimplexPiece(int d) : dim(d) {
    if (d < 1) throw std::invalid_argument("simplex: dimension must be at least 1");
}

OrthantPiece::OrthantPiece(int d) : dim(d) {
    if (d < 1) throw std::invalid_argument("orthant: dimension must be at least 1");
}

int piece_dim(const ConvexPiece& p) {
    return std::visit(
        [](const auto& q) -> int {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, BoxPiece>) return static_cast<int>(q.lo.size());
            if constexpr (std::is_same_v<T, BallPiece>) return static_cast<int>(q.center.size());
            if constexpr (std::is_same_v<T, HalfspacePiece>) return static_cast<int>(q.normal.size());
            if constexpr (std::is_same_v<T, AffineEqPiece>) return static_cast<int>(q.A().cols());
            if constexpr (std::is_same_v<T, SimplexPiece>) return q.dim;
            if constexpr (std::is_same_v<T, OrthantPiece>) return q.dim;
        },
        p);
}

Vec project_piece(const ConvexPiece& p, const Vec& x) {
    require_dim(x, piece_dim(p), "project_piece");
    return std::visit(
        [&x](const auto& q) -> Vec {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, BoxPiece>) {
                return x.cwiseMax(q.lo).cwiseMin(q.hi);
            } else if constexpr (std::is_same_v<T, BallPiece>) {
                Vec d = x - q.center;
                double n = d.norm();
                if (n <= q.radius) return x;
                return q.center + (q.radius / n) * d;
            } else if constexpr (std::is_same_v<T, HalfspacePiece>) {
                double excess = q.normal.dot(x) - q.offset;
                if (excess <= 0.0) return x;
                return x - (excess / q.normal.squaredNorm()) * q.normal;
            } else if constexpr (std::is_same_v<T, AffineEqPiece>) {
                return q.project(x);
            } else if constexpr (std::is_same_v<T, SimplexPiece>) {
                return project_simplex(x);
            } else {  // OrthantPiece
                return x.cwiseMax(0.0);
            }
        },
        p);
}

double piece_violation(const ConvexPiece& p, const Vec& x) {
    return std::visit(
        [&x](const auto& q) -> double {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, BoxPiece>) {
                double v = 0.0;
                for (Eigen::Index i = 0; i < x.size(); ++i) {
                    v = std::max({v, q.lo[i] - x[i], x[i] - q.hi[i]});
                }
                return v;
            } else if constexpr (std::is_same_v<T, BallPiece>) {
                return std::max(0.0, (x - q.center).norm() - q.radius);
            } else if constexpr (std::is_same_v<T, HalfspacePiece>) {
                return std::max(0.0, (q.normal.dot(x) - q.offset) / q.normal.norm());
            } else if constexpr (std::is_same_v<T, AffineEqPiece>) {
                return q.residual(x);
            } else if constexpr (std::is_same_v<T, SimplexPiece>) {
                double neg = std::max(0.0, -x.minCoeff());
                return std::max(neg, std::abs(x.sum() - 1.0));
            } else {  // OrthantPiece
                return std::max(0.0, -x.minCoeff());
            }
        },
        p);
}

bool piece_contains(const ConvexPiece& p, const Vec& x, double tol) {
    return piece_violation(p, x) <= tol;
}

Vec project_simplex(const Vec& x) {
    const Eigen::Index d = x.size();
    if (d < 1) throw std::invalid_argument("project_simplex: empty vector");
    std::vector<double> u(x.data(), x.data() + d);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = 0.0;
    int rho = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
        cumsum += u[static_cast<std::size_t>(j)];
        double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<std::size_t>(j)] - candidate > 0.0) {
            rho = static_cast<int>(j + 1);
            tau = candidate;
        }
    }
    (void)rho;
    Vec p(d);
    for (Eigen::Index i = 0; i < d; ++i) p[i] = std::max(0.0, x[i] - tau);
    return p;
}

Vec project_intersection(const Intersection& s, const Vec& x) {
    if (s.pieces.empty()) throw std::invalid_argument("project_intersection: no pieces");
    if (s.pieces.size() == 1) return project_piece(s.pieces.front(), x);

    const std::size_t m = s.pieces.size();
    Vec z = x;
    std::vector<Vec> corrections(m, Vec::Zero(x.size()));
    double residual = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < s.max_sweeps; ++sweep) {
        Vec z_prev = z;
        for (std::size_t i = 0; i < m; ++i) {
            Vec w = z + corrections[i];
            Vec y = project_piece(s.pieces[i], w);
            corrections[i] = w - y;
            z = std::move(y);
        }
        double change = (z - z_prev).lpNorm<Eigen::Infinity>();
        residual = 0.0;
        for (const auto& piece : s.pieces) residual = std::max(residual, piece_violation(piece, z));
        if (change < s.tol && residual <= s.tol) return z;
    }
    throw NonConvergence(s.max_sweeps, residual);
}

Vec project_affine_nonneg(const Mat& A, const Vec& b, const Vec& x, double tol, int max_sweeps) {
    Intersection s;
    s.pieces.emplace_back(AffineEqPiece(A, b));
    s.pieces.emplace_back(OrthantPiece(static_cast<int>(A.cols())));
    s.tol = tol;
    s.max_sweeps = max_sweeps;
    return project_intersection(s, x);
}

}  // namespace sharpsa

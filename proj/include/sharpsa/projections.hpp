#pragma once

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>
#include <variant>
#include <vector>

#include "sharpsa/vec.hpp"

namespace sharpsa {

inline constexpr double kMembershipTol = 1e-9;

struct BoxPiece {
    Vec lo, hi;
    BoxPiece(Vec lo_, Vec hi_);
};

struct BallPiece {
    Vec center;
    double radius;
    BallPiece(Vec center_, double radius_);
};

/// Halfspace {x : normal' x <= offset}.
struct HalfspacePiece {
    Vec normal;
    double offset;
    HalfspacePiece(Vec normal_, double offset_);
};

/// Affine subspace {x : A x = b}; rows of A must be linearly independent
/// (checked at construction). Projection solves the normal equations with a
/// Cholesky factor of A A' computed once.
class AffineEqPiece {
  public:
    AffineEqPiece(Mat A, Vec b);

    const Mat& A() const { return A_; }
    const Vec& b() const { return b_; }

    Vec project(const Vec& x) const;
    double residual(const Vec& x) const;  // ||A x - b||_inf

  private:
    Vec residual_vec(const Vec& x) const;  // A x - b

    Mat A_;
    Vec b_;
    Eigen::LLT<Mat> llt_;  // of A A'
    // Sparse copy used for the matvecs when A is mostly zeros (occupancy
    // constraint matrices are).
    Eigen::SparseMatrix<double> sparse_;
    bool use_sparse_ = false;
};

struct SimplexPiece {
    int dim;
    explicit SimplexPiece(int d);
};

struct OrthantPiece {
    int dim;
    explicit OrthantPiece(int d);
};

using ConvexPiece = std::variant<BoxPiece, BallPiece, HalfspacePiece, AffineEqPiece, SimplexPiece, OrthantPiece>;

int piece_dim(const ConvexPiece& p);
Vec project_piece(const ConvexPiece& p, const Vec& x);
bool piece_contains(const ConvexPiece& p, const Vec& x, double tol = kMembershipTol);

/// Worst constraint violation of x against the piece, measured as a
/// Euclidean-distance-like quantity (zero inside).
double piece_violation(const ConvexPiece& p, const Vec& x);

/// Euclidean projection onto the probability simplex via sort-and-threshold.
Vec project_simplex(const Vec& x);

struct Intersection {
    std::vector<ConvexPiece> pieces;
    double tol = 1e-10;
    int max_sweeps = 10000;
};

/// Dykstra's alternating projection with correction vectors; converges to the
/// Euclidean projection onto the intersection. Throws NonConvergence when the
/// sweep budget runs out (empty or ill-conditioned intersection).
Vec project_intersection(const Intersection& s, const Vec& x);

/// Projection onto {x >= 0 : A x = b} by Dykstra on the affine and orthant pieces.
Vec project_affine_nonneg(const Mat& A, const Vec& b, const Vec& x, double tol = 1e-10,
                          int max_sweeps = 10000);

}  // namespace sharpsa

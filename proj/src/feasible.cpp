#include "sharpsa/feasible.hpp"

#include <cmath>
#include <limits>

#include "sharpsa/errors.hpp"

namespace sharpsa {

namespace {

std::optional<BoundingBox> piece_box(const ConvexPiece& p) {
    if (const auto* box = std::get_if<BoxPiece>(&p)) return BoundingBox{box->lo, box->hi};
    if (const auto* ball = std::get_if<BallPiece>(&p)) {
        Vec r = Vec::Constant(ball->center.size(), ball->radius);
        return BoundingBox{ball->center - r, ball->center + r};
    }
    if (const auto* sx = std::get_if<SimplexPiece>(&p)) {
        return BoundingBox{Vec::Zero(sx->dim), Vec::Ones(sx->dim)};
    }
    return std::nullopt;  // halfspace / affine / orthant alone are unbounded
}

}  // namespace

Vec FeasibleSet::lmo(const Vec&) const { throw MissingLmo(); }

Vec vertex_lmo(const std::vector<Vec>& vertices, const Vec& c) {
    if (vertices.empty()) throw MissingLmo();
    std::size_t best = 0;
    double best_val = c.dot(vertices[0]);
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        double v = c.dot(vertices[i]);
        if (v < best_val - 1e-15) {
            best_val = v;
            best = i;
        }
    }
    return vertices[best];
}

PieceSet::PieceSet(ConvexPiece piece) : piece_(std::move(piece)) {}

int PieceSet::dim() const { return piece_dim(piece_); }

bool PieceSet::contains(const Vec& x, double tol) const { return piece_contains(piece_, x, tol); }

Vec PieceSet::project(const Vec& x) const { return project_piece(piece_, x); }

bool PieceSet::has_lmo() const {
    return std::holds_alternative<BallPiece>(piece_) || std::holds_alternative<BoxPiece>(piece_) ||
           std::holds_alternative<SimplexPiece>(piece_);
}

Vec PieceSet::lmo(const Vec& c) const {
    require_dim(c, dim(), "lmo");
    if (const auto* ball = std::get_if<BallPiece>(&piece_)) {
        double n = c.norm();
        if (n <= 0.0) return ball->center;
        return ball->center - (ball->radius / n) * c;
    }
    if (const auto* box = std::get_if<BoxPiece>(&piece_)) {
        Vec v(c.size());
        for (Eigen::Index i = 0; i < c.size(); ++i) v[i] = c[i] < 0.0 ? box->hi[i] : box->lo[i];
        return v;
    }
    if (const auto* sx = std::get_if<SimplexPiece>(&piece_)) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < c.size(); ++i) {
            if (c[i] < c[best] - 1e-15) best = i;
        }
        Vec v = Vec::Zero(sx->dim);
        v[best] = 1.0;
        return v;
    }
    throw MissingLmo();
}

std::optional<double> PieceSet::diameter() const {
    if (const auto* ball = std::get_if<BallPiece>(&piece_)) return 2.0 * ball->radius;
    if (const auto* box = std::get_if<BoxPiece>(&piece_)) return (box->hi - box->lo).norm();
    if (std::holds_alternative<SimplexPiece>(piece_)) return std::sqrt(2.0);
    return std::nullopt;
}

BoundingBox PieceSet::bounding_box() const {
    auto box = piece_box(piece_);
    if (!box) throw std::logic_error("bounding_box: piece is unbounded");
    return *box;
}

IntersectionSet::IntersectionSet(Intersection inter, std::vector<Vec> vertices,
                                 std::optional<BoundingBox> box)
    : inter_(std::move(inter)), vertices_(std::move(vertices)), box_(std::move(box)) {
    if (inter_.pieces.empty()) throw std::invalid_argument("intersection: no pieces");
}

int IntersectionSet::dim() const { return piece_dim(inter_.pieces.front()); }

bool IntersectionSet::contains(const Vec& x, double tol) const {
    for (const auto& p : inter_.pieces) {
        if (!piece_contains(p, x, tol)) return false;
    }
    return true;
}

Vec IntersectionSet::project(const Vec& x) const { return project_intersection(inter_, x); }

bool IntersectionSet::has_lmo() const { return !vertices_.empty(); }

Vec IntersectionSet::lmo(const Vec& c) const { return vertex_lmo(vertices_, c); }

std::optional<double> IntersectionSet::diameter() const {
    if (vertices_.empty()) return std::nullopt;
    double d = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
            d = std::max(d, (vertices_[i] - vertices_[j]).norm());
        }
    }
    return d;
}

BoundingBox IntersectionSet::bounding_box() const {
    if (box_) return *box_;
    std::optional<BoundingBox> acc;
    for (const auto& p : inter_.pieces) {
        auto b = piece_box(p);
        if (!b) continue;
        if (!acc) {
            acc = b;
        } else {
            acc->lo = acc->lo.cwiseMax(b->lo);
            acc->hi = acc->hi.cwiseMin(b->hi);
        }
    }
    if (!acc) {
        if (!vertices_.empty()) {
            BoundingBox b{vertices_.front(), vertices_.front()};
            for (const auto& v : vertices_) {
                b.lo = b.lo.cwiseMin(v);
                b.hi = b.hi.cwiseMax(v);
            }
            return b;
        }
        throw std::logic_error("bounding_box: no bounded piece in intersection");
    }
    return *acc;
}

}  // namespace sharpsa

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "sharpsa/projections.hpp"
#include "sharpsa/vec.hpp"

namespace sharpsa {

struct BoundingBox {
    Vec lo, hi;
};

/// Feasible region interface shared by all algorithms. Implementations are
/// immutable after construction and safe for concurrent read-only use.
class FeasibleSet {
  public:
    virtual ~FeasibleSet() = default;

    virtual int dim() const = 0;
    virtual bool contains(const Vec& x, double tol = kMembershipTol) const = 0;
    virtual Vec project(const Vec& x) const = 0;

    virtual bool has_lmo() const { return false; }
    /// argmin over the set of c' x; deterministic tie-breaking.
    virtual Vec lmo(const Vec& c) const;

    virtual std::optional<double> diameter() const { return std::nullopt; }

    /// Axis-aligned box enclosing the set; used by rejection samplers.
    virtual BoundingBox bounding_box() const = 0;
};

/// A single closed-form piece. Supports the LMO for balls, boxes and the simplex.
class PieceSet : public FeasibleSet {
  public:
    explicit PieceSet(ConvexPiece piece);

    int dim() const override;
    bool contains(const Vec& x, double tol) const override;
    Vec project(const Vec& x) const override;
    bool has_lmo() const override;
    Vec lmo(const Vec& c) const override;
    std::optional<double> diameter() const override;
    BoundingBox bounding_box() const override;

    const ConvexPiece& piece() const { return piece_; }

  private:
    ConvexPiece piece_;
};

/// Intersection of pieces projected with Dykstra sweeps. An optional vertex
/// list (for polytopes) enables the LMO and an exact diameter; an explicit
/// bounding box overrides the one intersected from the pieces.
class IntersectionSet : public FeasibleSet {
  public:
    explicit IntersectionSet(Intersection inter, std::vector<Vec> vertices = {},
                             std::optional<BoundingBox> box = std::nullopt);

    int dim() const override;
    bool contains(const Vec& x, double tol) const override;
    Vec project(const Vec& x) const override;
    bool has_lmo() const override;
    Vec lmo(const Vec& c) const override;
    std::optional<double> diameter() const override;
    BoundingBox bounding_box() const override;

    const Intersection& intersection() const { return inter_; }
    const std::vector<Vec>& vertices() const { return vertices_; }

  private:
    Intersection inter_;
    std::vector<Vec> vertices_;
    std::optional<BoundingBox> box_;
};

/// Lowest-index vertex minimizing c' v.
Vec vertex_lmo(const std::vector<Vec>& vertices, const Vec& c);

}  // namespace sharpsa

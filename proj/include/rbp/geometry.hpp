#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rbp
{

//! Largest ambient dimension supported by the predicates and the hull.
inline constexpr int kMaxDimension = 10;

//! Read-only view of one point's coordinates.
using Coords = std::span<double const>;

//---------------------------------------------------------------------------//
/*!
 * A point in R^d, optionally tagged with the index of the sample it came from.
 */
struct Point
{
    std::vector<double> coords;
    std::optional<std::size_t> index;

    std::size_t dimension() const noexcept { return coords.size(); }
    operator Coords() const noexcept { return coords; }
};

//---------------------------------------------------------------------------//
/*!
 * Contiguous storage for n points of a common dimension.
 *
 * Coordinates are stored row-major; element i is a view of length d.
 */
class PointSet
{
  public:
    PointSet() = default;
    explicit PointSet(int dimension);
    PointSet(int dimension, std::vector<double> flat);

    static PointSet from_points(std::span<Point const> points);

    int dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept
    {
        return dim_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(dim_);
    }
    bool empty() const noexcept { return data_.empty(); }

    Coords operator[](std::size_t i) const noexcept
    {
        return {data_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }

    void push_back(Coords p);
    void reserve(std::size_t n) { data_.reserve(n * dim_); }
    Point point(std::size_t i) const;
    std::span<double const> flat() const noexcept { return data_; }

  private:
    int dim_{0};
    std::vector<double> data_;
};

//---------------------------------------------------------------------------//
/*!
 * Affine hyperplane H(u,t) = {x : <x,u> = t} with unit normal u.
 *
 * The closed halfspace H^+(u,t) is {x : <x,u> >= t}.
 */
struct Hyperplane
{
    std::vector<double> normal;
    double offset{0};

    double signed_distance(Coords x) const noexcept;
};

//! Position of a point relative to an oriented facet.
enum class Side
{
    beneath = -1,
    on = 0,
    beyond = 1,
};

char const* to_string(Side s) noexcept;

//---------------------------------------------------------------------------//
/*!
 * Exact sign of det[[p_0, 1], ..., [p_d, 1]] for d+1 points in R^d.
 *
 * A floating-point evaluation with a certified forward error bound decides
 * the sign whenever it can; otherwise the determinant is re-evaluated over
 * big integers obtained from the binary representation of the inputs.
 * Throws std::invalid_argument on a dimension mismatch.
 */
int orientation(std::span<Coords const> simplex);
int orientation(std::span<Point const> simplex);

//! Same determinant evaluated purely in exact integer arithmetic.
int orientation_exact(std::span<Coords const> simplex);

//! Result of the floating filter alone: nullopt when it cannot commit.
std::optional<int> orientation_filtered(std::span<Coords const> simplex);

//! Exact dimension of the affine hull of the given points (-1 if empty).
int affine_dimension(std::span<Coords const> points);

//---------------------------------------------------------------------------//
/*!
 * Hyperplane through d facet points, retaining the points themselves so that
 * side tests are decided exactly by orientation() rather than through the
 * rounded normal and offset.
 */
class OrientedFacet
{
  public:
    //! Throws GeneralPositionError if the reference lies on the facet span.
    OrientedFacet(std::span<Coords const> facet_points,
                  Coords interior_reference);

    Hyperplane const& plane() const noexcept { return plane_; }
    int dimension() const noexcept { return dim_; }
    Side side_of(Coords x) const;

  private:
    int dim_;
    std::vector<double> points_;
    int reference_sign_;
    Hyperplane plane_;
};

//! Plane through the facet points with the reference strictly beneath.
Hyperplane
facet_hyperplane(std::span<Coords const> facet_points, Coords interior_reference);

inline Side side_of(OrientedFacet const& facet, Coords x)
{
    return facet.side_of(x);
}

// Small vector helpers shared across modules
double dot(Coords a, Coords b) noexcept;
double norm(Coords a) noexcept;
double distance(Coords a, Coords b) noexcept;

}  // namespace rbp

#pragma once

#include <cstddef>
#include <vector>

#include "rbp/geometry.hpp"
#include "rbp/random.hpp"

namespace rbp
{

enum class BodyKind
{
    ball,
    ellipsoid,
};

char const* to_string(BodyKind k) noexcept;

//! Boundary points must satisfy their defining equation to this residual.
inline constexpr double kBoundaryTolerance = 1e-9;

//---------------------------------------------------------------------------//
/*!
 * Smooth, strictly convex body with positive curvature: a ball or an
 * axis-aligned ellipsoid centered at the origin.
 *
 * Sampling is uniform with respect to surface measure on the boundary.
 */
class ConvexBodyModel
{
  public:
    static ConvexBodyModel ball(int dimension,
                                double radius = 1,
                                std::vector<double> center = {});
    static ConvexBodyModel ellipsoid(std::vector<double> semi_axes);

    BodyKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return dim_; }
    //! Ball radius (zero for ellipsoids)
    double radius() const noexcept { return radius_; }
    //! Ball center; the origin for ellipsoids
    std::vector<double> const& center() const noexcept { return center_; }
    //! Ellipsoid semi-axes; d copies of the radius for balls
    std::vector<double> const& semi_axes() const noexcept { return axes_; }

    //! h_K(u) for a unit vector u; throws std::invalid_argument otherwise
    double support(Coords u) const;

    //! Relative residual of the defining equation at x
    double boundary_residual(Coords x) const;

    //! Outward unit normal at a boundary point
    std::vector<double> boundary_normal(Coords x) const;

    void sample_surface(RandomStream& rng, std::span<double> out) const;
    Point sample_surface(RandomStream& rng) const;
    PointSet sample_surface(RandomStream& rng, std::size_t n) const;

    double diameter() const noexcept;
    //! Total boundary measure (closed form for balls, quadrature otherwise)
    double surface_area() const;

  private:
    ConvexBodyModel() = default;

    BodyKind kind_{BodyKind::ball};
    int dim_{0};
    double radius_{0};
    double min_axis_{0};
    std::vector<double> center_;
    std::vector<double> axes_;
    double surface_area_{0};

    void check_point(Coords x, char const* what) const;
};

//---------------------------------------------------------------------------//
/*!
 * Boundary cap: points x of the boundary with <x, normal> >= threshold,
 * where threshold = h_K(normal) - height.
 */
struct Cap
{
    std::vector<double> center;
    std::vector<double> normal;
    double height{0};
    double threshold{0};
};

//! Cap of height h at the boundary point y; throws if h <= 0
Cap make_cap(ConvexBodyModel const& body, Coords y, double h);

bool cap_contains(ConvexBodyModel const& body, Cap const& cap, Coords x);

//! Monte Carlo or exact area with its standard error (zero when exact)
struct AreaEstimate
{
    double value{0};
    double std_error{0};
};

//! Exact for balls; hit-or-miss with the given sample count for ellipsoids
AreaEstimate cap_area(ConvexBodyModel const& body,
                      Cap const& cap,
                      RandomStream& rng,
                      std::size_t samples = 200000);

//! Surface measure of the boundary inside the closed ball B(x, r)
AreaEstimate boundary_ball_area(ConvexBodyModel const& body,
                                Coords x,
                                double r,
                                RandomStream& rng,
                                std::size_t samples = 200000);

//! Exact area of a cap of the given height on a sphere of radius rho in R^d
double spherical_cap_area(int d, double rho, double height);

//! Area of the unit sphere S^{m} in R^{m+1}
double unit_sphere_area(int m);

//! Radii of balls that roll freely inside and outside the body.
struct BlaschkeRadii
{
    double r_in{0};
    double r_out{0};
};

BlaschkeRadii blaschke_radii(ConvexBodyModel const& body);

//! Common cap height with centers whose caps are pairwise disjoint.
struct CapPacking
{
    double height{0};
    PointSet centers;
};

/*!
 * Greedy farthest-point packing of at least n caps of a common height.
 *
 * Centers come from a pool of 100 n boundary samples. Two caps are taken to
 * be disjoint when their centers are further apart than
 * 2 (sqrt(2 r_out h) + h), since each cap lies in the ball of that radius
 * about its center. The height is the largest (within 1%) for which the
 * greedy selection reaches n centers. Throws CapacityError when no positive
 * height works.
 */
CapPacking
pack_disjoint_caps(ConvexBodyModel const& body, std::size_t n, RandomStream& rng);

//! Separation that guarantees disjoint caps of height h
double cap_separation(ConvexBodyModel const& body, double h);

}  // namespace rbp

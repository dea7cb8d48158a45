#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbp/geometry.hpp"

namespace rbp
{

using VertexIndex = std::uint32_t;
using FacetIndex = std::uint32_t;

//---------------------------------------------------------------------------//
/*!
 * Read-only view of one facet of a simplicial hull.
 *
 * vertices are strictly increasing; neighbors[i] is the facet sharing the
 * ridge opposite vertices[i]. The plane is the outward supporting hyperplane.
 */
struct FacetView
{
    std::span<VertexIndex const> vertices;
    std::span<FacetIndex const> neighbors;
    std::span<double const> normal;
    double offset;
};

//---------------------------------------------------------------------------//
/*!
 * Boundary complex of the convex hull of a general-position point set.
 *
 * Every facet is a (d-1)-simplex and every ridge lies in exactly two facets.
 * Facet data is stored in flat arrays with stride d.
 */
class HullComplex
{
  public:
    HullComplex() = default;

    int dimension() const noexcept { return dim_; }
    PointSet const& points() const noexcept { return points_; }
    //! Sorted indices of the input points that are hull vertices
    std::vector<VertexIndex> const& hull_vertices() const noexcept
    {
        return hull_vertices_;
    }
    std::size_t num_facets() const noexcept { return offsets_.size(); }
    FacetView facet(FacetIndex f) const noexcept;

    std::span<VertexIndex const> facet_vertex_data() const noexcept
    {
        return facet_vertices_;
    }

    //! Lexicographically sorted vertex tuples of all facets
    std::vector<std::vector<VertexIndex>> facet_sets() const;

    //! Check adjacency symmetry and the two-facets-per-ridge property
    bool is_closed_pseudomanifold() const;

    // Assembly; used by the hull builders
    HullComplex(PointSet points,
                std::vector<VertexIndex> facet_vertices,
                std::vector<FacetIndex> facet_neighbors,
                std::vector<double> normals,
                std::vector<double> offsets);

  private:
    int dim_{0};
    PointSet points_;
    std::vector<VertexIndex> hull_vertices_;
    std::vector<VertexIndex> facet_vertices_;
    std::vector<FacetIndex> facet_neighbors_;
    std::vector<double> normals_;
    std::vector<double> offsets_;
};

//! Beneath-beyond construction in index order with conflict lists.
HullComplex incremental_hull(PointSet const& points);

//! Test oracle enumerating every d-subset; intended for n <= 25.
HullComplex brute_force_hull(PointSet const& points);

}  // namespace rbp

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rbp/geometry.hpp"

namespace rbp
{

//---------------------------------------------------------------------------//
/*!
 * Combinatorial type T_j^d of a d-polytope with d+2 vertices.
 *
 * Such a polytope is the hull of a d-simplex S and a point x beyond j facets
 * of S; types j and d-j coincide, so labels are stored folded with
 * 1 <= j <= floor(d/2).
 */
struct TypeLabel
{
    int d{0};
    int j{0};

    //! Fold j into [1, floor(d/2)]; throws if j is not in [1, d-1]
    static TypeLabel folded(int d, int j);

    //! "T_j^d"
    std::string name() const;
    bool operator==(TypeLabel const&) const = default;
};

//! f_k(T_j^d) = C(d+2, d-k+1) - C(j+1, d-k+1) - C(d-j+1, d-k+1)
std::int64_t type_f_count(int d, int j, int k);

//! Number of facets of the simplex S that x lies strictly beyond.
int beyond_count(Coords x, std::span<Coords const> simplex);

struct RegionResult
{
    //! bey(x,S) when it is in [1, d-1] and x is off every facet span
    std::optional<int> region;
    //! x lies exactly on the span of some facet of S
    bool boundary{false};
    int beyond{0};
};

RegionResult region_of(Coords x, std::span<Coords const> simplex);

/*!
 * Classify d+2 points whose hull has all of them as vertices.
 *
 * The last point is the apex and the others form S; if they are affinely
 * dependent the apex moves to the previous point, and so on.
 */
TypeLabel classify_d_plus_2(PointSet const& points);

//! Classification with an explicit apex; throws if the rest is degenerate
TypeLabel classify_with_apex(PointSet const& points, std::size_t apex);

}  // namespace rbp

#include "rbp/combinatorics.hpp"

#include <stdexcept>
#include <vector>

#include "rbp/error.hpp"
#include "rbp/faces.hpp"
#include "rbp/hull.hpp"

namespace rbp
{
namespace
{

void check_simplex(std::span<Coords const> simplex)
{
    if (simplex.empty()
        || simplex.size() != simplex.front().size() + 1)
    {
        throw std::invalid_argument("simplex must have d+1 points in R^d");
    }
}

//! Side of x for each facet of S, where facet i omits vertex i
std::vector<Side> facet_sides(Coords x, std::span<Coords const> simplex)
{
    check_simplex(simplex);
    std::size_t const m = simplex.size();
    if (x.size() + 1 != m)
        throw std::invalid_argument("point and simplex dimensions differ");
    std::vector<Side> sides;
    sides.reserve(m);
    int const ref = orientation(simplex);
    if (ref == 0)
        throw GeneralPositionError("simplex points are affinely dependent");
    std::vector<Coords> seq(m);
    for (std::size_t i = 0; i < m; ++i)
    {
        // Replace vertex i by x: opposite sign to the simplex means beyond
        for (std::size_t k = 0; k < m; ++k)
            seq[k] = k == i ? x : simplex[k];
        int const o = orientation(seq);
        sides.push_back(o == 0 ? Side::on
                        : o == ref ? Side::beneath
                                   : Side::beyond);
    }
    return sides;
}

std::vector<Coords> without(PointSet const& points, std::size_t skip)
{
    std::vector<Coords> s;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        if (i != skip)
            s.push_back(points[i]);
    }
    return s;
}

}  // namespace

TypeLabel TypeLabel::folded(int d, int j)
{
    if (d < 2 || j < 1 || j > d - 1)
        throw std::invalid_argument("type label needs d >= 2 and 1 <= j <= d-1");
    return {d, std::min(j, d - j)};
}

std::string TypeLabel::name() const
{
    return "T_" + std::to_string(j) + "^" + std::to_string(d);
}

std::int64_t type_f_count(int d, int j, int k)
{
    if (d < 2 || j < 1 || j > d / 2 || k < 1 || k > d - 1)
    {
        throw std::invalid_argument(
            "type_f_count: need 1 <= j <= floor(d/2) and 1 <= k <= d-1");
    }
    int const b = d - k + 1;
    return binomial(d + 2, b) - binomial(j + 1, b) - binomial(d - j + 1, b);
}

int beyond_count(Coords x, std::span<Coords const> simplex)
{
    int count = 0;
    for (Side s : facet_sides(x, simplex))
        count += s == Side::beyond;
    return count;
}

RegionResult region_of(Coords x, std::span<Coords const> simplex)
{
    RegionResult r;
    for (Side s : facet_sides(x, simplex))
    {
        r.beyond += s == Side::beyond;
        r.boundary = r.boundary || s == Side::on;
    }
    int const d = static_cast<int>(x.size());
    if (!r.boundary && r.beyond >= 1 && r.beyond <= d - 1)
        r.region = r.beyond;
    return r;
}

TypeLabel classify_with_apex(PointSet const& points, std::size_t apex)
{
    int const d = points.dimension();
    if (points.size() != static_cast<std::size_t>(d) + 2)
        throw std::invalid_argument("classify: need exactly d+2 points");
    auto const simplex = without(points, apex);
    auto const r = region_of(points[apex], simplex);
    if (r.boundary)
    {
        std::vector<std::size_t> all(points.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = i;
        throw GeneralPositionError("classify: apex lies on a facet span of S",
                                   std::move(all));
    }
    if (r.beyond == 0)
        throw std::invalid_argument("classify: apex lies inside the simplex");
    if (r.beyond == d)
        throw std::invalid_argument("classify: apex beyond d facets of S "
                                    "is inconsistent (bey = d)");
    return TypeLabel::folded(d, r.beyond);
}

TypeLabel classify_d_plus_2(PointSet const& points)
{
    int const d = points.dimension();
    if (d < 2 || points.size() != static_cast<std::size_t>(d) + 2)
        throw std::invalid_argument("classify: need exactly d+2 points in R^d");
    auto const hull = incremental_hull(points);
    if (hull.hull_vertices().size() != points.size())
    {
        throw std::invalid_argument("classify: hull has "
                                    + std::to_string(hull.hull_vertices().size())
                                    + " vertices, expected d+2");
    }
    for (std::size_t step = 0; step < points.size(); ++step)
    {
        std::size_t const apex = points.size() - 1 - step;
        auto const simplex = without(points, apex);
        if (orientation(simplex) != 0)
            return classify_with_apex(points, apex);
    }
    throw GeneralPositionError("classify: every choice of S is degenerate");
}

}  // namespace rbp

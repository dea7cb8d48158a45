#include "rbp/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "detail/exact.hpp"
#include "detail/predicates.hpp"
#include "rbp/error.hpp"

namespace rbp
{
namespace
{

void check_simplex(std::span<Coords const> simplex)
{
    if (simplex.empty())
        throw std::invalid_argument("orientation: empty point sequence");
    std::size_t const d = simplex.front().size();
    if (d < 1 || d > static_cast<std::size_t>(kMaxDimension))
        throw std::invalid_argument("orientation: unsupported dimension "
                                    + std::to_string(d));
    if (simplex.size() != d + 1)
        throw std::invalid_argument("orientation: expected d+1 points");
    for (auto const& p : simplex)
    {
        if (p.size() != d)
            throw std::invalid_argument("orientation: dimension mismatch");
    }
}

}  // namespace

//---------------------------------------------------------------------------//
PointSet::PointSet(int dimension) : dim_(dimension)
{
    if (dimension < 1)
        throw std::invalid_argument("PointSet: dimension must be positive");
}

PointSet::PointSet(int dimension, std::vector<double> flat)
    : dim_(dimension), data_(std::move(flat))
{
    if (dimension < 1 || data_.size() % dimension != 0)
        throw std::invalid_argument("PointSet: flat size not a multiple of d");
    for (double x : data_)
    {
        if (!std::isfinite(x))
            throw std::invalid_argument("PointSet: non-finite coordinate");
    }
}

PointSet PointSet::from_points(std::span<Point const> points)
{
    if (points.empty())
        throw std::invalid_argument("PointSet: no points");
    PointSet result(static_cast<int>(points.front().dimension()));
    result.reserve(points.size());
    for (auto const& p : points)
        result.push_back(p.coords);
    return result;
}

void PointSet::push_back(Coords p)
{
    if (static_cast<int>(p.size()) != dim_)
        throw std::invalid_argument("PointSet: dimension mismatch");
    for (double x : p)
    {
        if (!std::isfinite(x))
            throw std::invalid_argument("PointSet: non-finite coordinate");
    }
    data_.insert(data_.end(), p.begin(), p.end());
}

Point PointSet::point(std::size_t i) const
{
    auto c = (*this)[i];
    return {std::vector<double>(c.begin(), c.end()), i};
}

//---------------------------------------------------------------------------//
double Hyperplane::signed_distance(Coords x) const noexcept
{
    return dot(normal, x) - offset;
}

char const* to_string(Side s) noexcept
{
    switch (s)
    {
        case Side::beneath:
            return "beneath";
        case Side::on:
            return "on";
        case Side::beyond:
            return "beyond";
    }
    return "?";
}

double dot(Coords a, Coords b) noexcept
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm(Coords a) noexcept
{
    return std::sqrt(dot(a, a));
}

double distance(Coords a, Coords b) noexcept
{
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        double const t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

//---------------------------------------------------------------------------//
std::optional<int> orientation_filtered(std::span<Coords const> simplex)
{
    check_simplex(simplex);
    int const d = static_cast<int>(simplex.size()) - 1;
    auto const cof
        = detail::last_row_cofactors(d, simplex[0], simplex.subspan(1, d - 1));
    auto s = detail::filtered_last_row_sign(d, cof, simplex[0], simplex[d]);
    if (!s)
        return std::nullopt;
    return detail::orientation_parity(d) * *s;
}

int orientation_exact(std::span<Coords const> simplex)
{
    check_simplex(simplex);
    return detail::exact_orientation_sign(simplex);
}

int orientation(std::span<Coords const> simplex)
{
    if (auto s = orientation_filtered(simplex))
        return *s;
    return detail::exact_orientation_sign(simplex);
}

int orientation(std::span<Point const> simplex)
{
    std::vector<Coords> views(simplex.begin(), simplex.end());
    return orientation(views);
}

int affine_dimension(std::span<Coords const> points)
{
    for (auto const& p : points)
    {
        if (p.size() != points.front().size())
            throw std::invalid_argument("affine_dimension: dimension mismatch");
    }
    return detail::exact_affine_rank(points);
}

//---------------------------------------------------------------------------//
OrientedFacet::OrientedFacet(std::span<Coords const> facet_points,
                             Coords interior_reference)
    : dim_(static_cast<int>(interior_reference.size()))
{
    if (static_cast<int>(facet_points.size()) != dim_)
        throw std::invalid_argument("facet needs exactly d points");
    std::vector<Coords> seq(facet_points.begin(), facet_points.end());
    seq.push_back(interior_reference);
    reference_sign_ = orientation(seq);
    if (reference_sign_ == 0)
        throw GeneralPositionError(
            "facet points affinely dependent or reference on their span");
    for (auto const& p : facet_points)
        points_.insert(points_.end(), p.begin(), p.end());

    // Outward normal: beyond <=> (-1)^(d+1) * s * <cof, x - p0> > 0
    auto const cof = detail::last_row_cofactors(dim_, facet_points[0],
                                                facet_points.subspan(1));
    double const flip = -detail::orientation_parity(dim_) * reference_sign_;
    plane_.normal.resize(dim_);
    for (int j = 0; j < dim_; ++j)
        plane_.normal[j] = flip * cof.cofactor[j];
    double const len = norm(plane_.normal);
    for (double& c : plane_.normal)
        c /= len;
    plane_.offset = dot(plane_.normal, facet_points[0]);
}

Side OrientedFacet::side_of(Coords x) const
{
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("side_of: dimension mismatch");
    std::vector<Coords> seq;
    seq.reserve(dim_ + 1);
    for (int i = 0; i < dim_; ++i)
        seq.emplace_back(points_.data() + i * dim_, dim_);
    seq.push_back(x);
    int const s = orientation(seq);
    if (s == 0)
        return Side::on;
    return s == reference_sign_ ? Side::beneath : Side::beyond;
}

Hyperplane
facet_hyperplane(std::span<Coords const> facet_points, Coords interior_reference)
{
    return OrientedFacet(facet_points, interior_reference).plane();
}

}  // namespace rbp

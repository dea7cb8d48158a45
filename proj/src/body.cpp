#include "rbp/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rbp/error.hpp"

namespace rbp
{
namespace
{

void fill_unit_gaussian(RandomStream& rng, std::span<double> out)
{
    double len2 = 0;
    do
    {
        len2 = 0;
        for (double& c : out)
        {
            c = rng.normal();
            len2 += c * c;
        }
    } while (len2 == 0);
    double const inv = 1 / std::sqrt(len2);
    for (double& c : out)
        c *= inv;
}

//! E|A^{-1} G| / E|G| for a standard Gaussian G and A = diag(axes)
double mean_inverse_norm_ratio(std::vector<double> const& axes)
{
    int const d = static_cast<int>(axes.size());
    // |y| = (1/(2 sqrt(pi))) int_0^inf (1 - exp(-s |y|^2)) s^{-3/2} ds;
    // averaging over y = A^{-1} G and substituting s = v^2 gives:
    auto integrand = [&](double v) {
        // Below this v^2 underflows relative to the axes; use the limit
        if (v < 1e-80)
        {
            double s = 0;
            for (double a : axes)
                s += 1 / (a * a);
            return 2 * s;
        }
        double log_phi = 0;
        for (double a : axes)
            log_phi -= 0.5 * std::log1p(2 * v * v / (a * a));
        return -2 * std::expm1(log_phi) / (v * v);
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double const integral = integrator.integrate(integrand, 0.0,
                                                 std::numeric_limits<double>::infinity(),
                                                 1e-13);
    double const mean_inv = integral / (2 * std::sqrt(std::numbers::pi));
    double const mean_g = std::sqrt(2.0) * std::exp(std::lgamma(0.5 * (d + 1))
                                                    - std::lgamma(0.5 * d));
    return mean_inv / mean_g;
}

}  // namespace

char const* to_string(BodyKind k) noexcept
{
    return k == BodyKind::ball ? "ball" : "ellipsoid";
}

double unit_sphere_area(int m)
{
    double const half = 0.5 * (m + 1);
    return 2 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double spherical_cap_area(int d, double rho, double height)
{
    if (d < 2)
        throw std::invalid_argument("spherical_cap_area: d must be >= 2");
    if (height <= 0)
        return 0;
    double const total = unit_sphere_area(d - 1) * std::pow(rho, d - 1);
    if (height >= 2 * rho)
        return total;
    double const theta0 = std::acos(std::clamp(1 - height / rho, -1.0, 1.0));
    if (d == 2)
        return 2 * rho * theta0;
    auto integrand = [d](double theta) { return std::pow(std::sin(theta), d - 2); };
    // Integrate the smaller side for accuracy near the full sphere
    bool const upper = theta0 > 0.5 * std::numbers::pi;
    double const a = upper ? theta0 : 0;
    double const b = upper ? std::numbers::pi : theta0;
    double const part = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, a, b, 15, 1e-15);
    double const area = unit_sphere_area(d - 2) * std::pow(rho, d - 1) * part;
    return upper ? total - area : area;
}

ConvexBodyModel
ConvexBodyModel::ball(int dimension, double radius, std::vector<double> center)
{
    if (dimension < 2 || dimension > kMaxDimension)
        throw std::invalid_argument("ball: dimension must be in [2, "
                                    + std::to_string(kMaxDimension) + "]");
    if (!(radius > 0) || !std::isfinite(radius))
        throw std::invalid_argument("ball: radius must be positive");
    if (center.empty())
        center.assign(dimension, 0.0);
    if (static_cast<int>(center.size()) != dimension)
        throw std::invalid_argument("ball: center has wrong dimension");
    for (double c : center)
    {
        if (!std::isfinite(c))
            throw std::invalid_argument("ball: center must be finite");
    }
    ConvexBodyModel b;
    b.kind_ = BodyKind::ball;
    b.dim_ = dimension;
    b.radius_ = radius;
    b.min_axis_ = radius;
    b.center_ = std::move(center);
    b.axes_.assign(dimension, radius);
    b.surface_area_ = unit_sphere_area(dimension - 1) * std::pow(radius, dimension - 1);
    return b;
}

ConvexBodyModel ConvexBodyModel::ellipsoid(std::vector<double> semi_axes)
{
    int const d = static_cast<int>(semi_axes.size());
    if (d < 2 || d > kMaxDimension)
        throw std::invalid_argument("ellipsoid: dimension must be in [2, "
                                    + std::to_string(kMaxDimension) + "]");
    for (double a : semi_axes)
    {
        if (!(a > 0) || !std::isfinite(a))
            throw std::invalid_argument("ellipsoid: semi-axes must be positive");
    }
    ConvexBodyModel b;
    b.kind_ = BodyKind::ellipsoid;
    b.dim_ = d;
    b.min_axis_ = *std::min_element(semi_axes.begin(), semi_axes.end());
    b.center_.assign(d, 0.0);
    b.axes_ = std::move(semi_axes);
    double prod = 1;
    for (double a : b.axes_)
        prod *= a;
    b.surface_area_ = unit_sphere_area(d - 1) * prod
                      * mean_inverse_norm_ratio(b.axes_);
    return b;
}

double ConvexBodyModel::support(Coords u) const
{
    if (static_cast<int>(u.size()) != dim_)
        throw std::invalid_argument("support: dimension mismatch");
    if (std::fabs(norm(u) - 1) > 1e-12)
        throw std::invalid_argument("support: direction is not a unit vector");
    if (kind_ == BodyKind::ball)
        return dot(center_, u) + radius_;
    double s = 0;
    for (int i = 0; i < dim_; ++i)
        s += axes_[i] * axes_[i] * u[i] * u[i];
    return std::sqrt(s);
}

double ConvexBodyModel::boundary_residual(Coords x) const
{
    if (kind_ == BodyKind::ball)
        return std::fabs(distance(x, center_) / radius_ - 1);
    double s = 0;
    for (int i = 0; i < dim_; ++i)
        s += (x[i] / axes_[i]) * (x[i] / axes_[i]);
    return std::fabs(s - 1);
}

void ConvexBodyModel::check_point(Coords x, char const* what) const
{
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    if (!(boundary_residual(x) <= kBoundaryTolerance))
        throw std::invalid_argument(std::string(what)
                                    + ": point is not on the boundary");
}

std::vector<double> ConvexBodyModel::boundary_normal(Coords x) const
{
    check_point(x, "boundary_normal");
    std::vector<double> n(dim_);
    for (int i = 0; i < dim_; ++i)
    {
        n[i] = kind_ == BodyKind::ball ? x[i] - center_[i]
                                       : x[i] / (axes_[i] * axes_[i]);
    }
    double const len = norm(n);
    for (double& c : n)
        c /= len;
    return n;
}

void ConvexBodyModel::sample_surface(RandomStream& rng, std::span<double> out) const
{
    if (kind_ == BodyKind::ball)
    {
        fill_unit_gaussian(rng, out);
        for (int i = 0; i < dim_; ++i)
            out[i] = center_[i] + radius_ * out[i];
        return;
    }
    // Accept a uniform direction u with probability proportional to the
    // surface Jacobian |A^{-1} u| of the map u -> A u, normalized by min a_i
    while (true)
    {
        fill_unit_gaussian(rng, out);
        double s = 0;
        for (int i = 0; i < dim_; ++i)
            s += (out[i] / axes_[i]) * (out[i] / axes_[i]);
        if (rng.uniform() < min_axis_ * std::sqrt(s))
            break;
    }
    for (int i = 0; i < dim_; ++i)
        out[i] *= axes_[i];
}

Point ConvexBodyModel::sample_surface(RandomStream& rng) const
{
    Point p;
    p.coords.resize(dim_);
    sample_surface(rng, p.coords);
    return p;
}

PointSet ConvexBodyModel::sample_surface(RandomStream& rng, std::size_t n) const
{
    std::vector<double> flat(n * dim_);
    for (std::size_t i = 0; i < n; ++i)
        sample_surface(rng, std::span<double>(flat.data() + i * dim_, dim_));
    return PointSet(dim_, std::move(flat));
}

double ConvexBodyModel::diameter() const noexcept
{
    return 2 * *std::max_element(axes_.begin(), axes_.end());
}

double ConvexBodyModel::surface_area() const
{
    return surface_area_;
}

//---------------------------------------------------------------------------//

Cap make_cap(ConvexBodyModel const& body, Coords y, double h)
{
    if (!(h > 0) || !std::isfinite(h))
        throw std::invalid_argument("cap: height must be positive");
    Cap cap;
    cap.center.assign(y.begin(), y.end());
    cap.normal = body.boundary_normal(y);
    cap.height = h;
    cap.threshold = body.support(cap.normal) - h;
    return cap;
}

bool cap_contains(ConvexBodyModel const& body, Cap const& cap, Coords x)
{
    if (!(body.boundary_residual(x) <= kBoundaryTolerance))
        throw std::invalid_argument("cap_contains: point is not on the boundary");
    return dot(x, cap.normal) >= cap.threshold;
}

AreaEstimate cap_area(ConvexBodyModel const& body,
                      Cap const& cap,
                      RandomStream& rng,
                      std::size_t samples)
{
    if (!(cap.height > 0))
        throw std::invalid_argument("cap_area: height must be positive");
    double const total = body.surface_area();
    if (body.kind() == BodyKind::ball)
    {
        return {spherical_cap_area(body.dimension(), body.radius(), cap.height), 0};
    }
    std::vector<double> opposite(cap.normal);
    for (double& c : opposite)
        c = -c;
    if (cap.threshold <= -body.support(opposite))
        return {total, 0};
    if (samples == 0)
        throw std::invalid_argument("cap_area: need at least one sample");

    std::vector<double> x(body.dimension());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i)
    {
        body.sample_surface(rng, x);
        if (dot(x, cap.normal) >= cap.threshold)
            ++hits;
    }
    double const p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p * total, total * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

AreaEstimate boundary_ball_area(ConvexBodyModel const& body,
                                Coords x,
                                double r,
                                RandomStream& rng,
                                std::size_t samples)
{
    if (!(r > 0))
        throw std::invalid_argument("boundary_ball_area: radius must be positive");
    if (!(body.boundary_residual(x) <= kBoundaryTolerance))
        throw std::invalid_argument("boundary_ball_area: point is not on the boundary");
    double const total = body.surface_area();
    if (r >= body.diameter())
        return {total, 0};
    if (body.kind() == BodyKind::ball)
    {
        // |z - x|^2 = 2 R (R - <z - c, u>) turns the ball into a cap
        double const rho = body.radius();
        return {spherical_cap_area(body.dimension(), rho, r * r / (2 * rho)), 0};
    }
    if (samples == 0)
        throw std::invalid_argument("boundary_ball_area: need at least one sample");
    std::vector<double> z(body.dimension());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i)
    {
        body.sample_surface(rng, z);
        if (distance(z, x) <= r)
            ++hits;
    }
    double const p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p * total, total * std::sqrt(p * (1 - p) / static_cast<double>(samples))};
}

BlaschkeRadii blaschke_radii(ConvexBodyModel const& body)
{
    if (body.kind() == BodyKind::ball)
        return {body.radius(), body.radius()};
    auto const& a = body.semi_axes();
    auto const [lo, hi] = std::minmax_element(a.begin(), a.end());
    return {(*lo) * (*lo) / (*hi), (*hi) * (*hi) / (*lo)};
}

double cap_separation(ConvexBodyModel const& body, double h)
{
    double const r_out = blaschke_radii(body).r_out;
    return 2 * (std::sqrt(2 * r_out * h) + h);
}

CapPacking
pack_disjoint_caps(ConvexBodyModel const& body, std::size_t n, RandomStream& rng)
{
    if (n == 0)
        throw std::invalid_argument("pack_disjoint_caps: n must be positive");
    int const d = body.dimension();
    std::size_t const pool_size = 100 * n;
    PointSet const pool = body.sample_surface(rng, pool_size);

    // Farthest-point traversal; gap[k] is the distance from the k-th pick
    // to the earlier picks, which is nonincreasing in k
    std::vector<std::size_t> order{0};
    std::vector<double> gap{std::numeric_limits<double>::infinity()};
    std::vector<double> nearest(pool_size, std::numeric_limits<double>::infinity());
    std::size_t last = 0;
    while (order.size() < n)
    {
        std::size_t best = 0;
        double best_dist = -1;
        for (std::size_t i = 0; i < pool_size; ++i)
        {
            double const dist = distance(pool[i], pool[last]);
            if (dist < nearest[i])
                nearest[i] = dist;
            if (nearest[i] > best_dist)
            {
                best_dist = nearest[i];
                best = i;
            }
        }
        order.push_back(best);
        gap.push_back(best_dist);
        last = best;
    }

    // Greedy selection at height h reaches n centers iff gap[n-1] > sep(h)
    double const needed = gap[n - 1];
    auto fits = [&](double h) { return cap_separation(body, h) < needed; };
    double lo = 0;
    double hi = body.diameter();
    if (fits(hi))
    {
        lo = hi;
    }
    else
    {
        while (hi - lo > 0.01 * lo)
        {
            double const mid = lo > 0 ? std::sqrt(lo * hi) : 0.5 * hi;
            if (mid <= std::numeric_limits<double>::min())
                break;
            (fits(mid) ? lo : hi) = mid;
        }
    }
    if (!(lo > std::numeric_limits<double>::min()))
    {
        throw CapacityError("pack_disjoint_caps: no positive cap height admits "
                            + std::to_string(n) + " disjoint caps");
    }

    CapPacking result;
    result.height = lo;
    result.centers = PointSet(d);
    result.centers.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        result.centers.push_back(pool[order[k]]);
    return result;
}

}  // namespace rbp

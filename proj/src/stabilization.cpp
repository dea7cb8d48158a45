#include "rbp/stabilization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "detail/parallel.hpp"
#include "rbp/error.hpp"
#include "rbp/faces.hpp"
#include "rbp/statistics.hpp"

namespace rbp
{
namespace
{

//! Facets incident to each vertex, in compressed row form
struct Incidence
{
    std::vector<std::size_t> start;
    std::vector<FacetIndex> facets;

    explicit Incidence(HullComplex const& hull)
    {
        std::size_t const n = hull.points().size();
        auto const fv = hull.facet_vertex_data();
        start.assign(n + 1, 0);
        for (auto v : fv)
            ++start[v + 1];
        for (std::size_t i = 0; i < n; ++i)
            start[i + 1] += start[i];
        facets.resize(fv.size());
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        std::size_t const d = static_cast<std::size_t>(hull.dimension());
        for (std::size_t i = 0; i < fv.size(); ++i)
            facets[fill[fv[i]]++] = static_cast<FacetIndex>(i / d);
    }

    std::span<FacetIndex const> star(VertexIndex v) const
    {
        return {facets.data() + start[v], start[v + 1] - start[v]};
    }
};

//! Distinct k-subsets of (F \ {v}) over the facets F of the star of v
std::int64_t count_star_faces(HullComplex const& hull,
                              std::span<FacetIndex const> star,
                              VertexIndex v,
                              int k)
{
    if (star.empty())
        return 0;
    if (k == 0)
        return 1;
    int const d = hull.dimension();
    int const m = d - 1;
    std::vector<std::array<VertexIndex, kMaxDimension>> tuples;
    std::array<VertexIndex, kMaxDimension> others{};
    std::array<int, kMaxDimension> idx{};
    for (FacetIndex f : star)
    {
        int c = 0;
        for (auto u : hull.facet(f).vertices)
        {
            if (u != v)
                others[c++] = u;
        }
        for (int i = 0; i < k; ++i)
            idx[i] = i;
        while (true)
        {
            std::array<VertexIndex, kMaxDimension> t{};
            for (int i = 0; i < k; ++i)
                t[i] = others[idx[i]];
            tuples.push_back(t);
            int i = k - 1;
            while (i >= 0 && idx[i] == m - k + i)
                --i;
            if (i < 0)
                break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    std::sort(tuples.begin(), tuples.end());
    return std::unique(tuples.begin(), tuples.end()) - tuples.begin();
}

void check_k(HullComplex const& hull, int k)
{
    if (k < 0 || k > hull.dimension() - 1)
        throw std::out_of_range("score: k must be in [0, d-1], got "
                                + std::to_string(k));
}

double farthest_in_ball_cap(ConvexBodyModel const& body,
                            Coords x,
                            Coords u,
                            double t)
{
    auto const& c = body.center();
    double const rho = body.radius();
    int const d = body.dimension();
    double const h = t - dot(c, u);  // plane offset measured from the center
    double const to_center = distance(x, c);
    if (h <= -rho)
        return to_center + rho;
    if (h >= rho)
    {
        // Cap degenerates to the single point c + rho u
        double s = 0;
        for (int i = 0; i < d; ++i)
            s += (c[i] + rho * u[i] - x[i]) * (c[i] + rho * u[i] - x[i]);
        return std::sqrt(s);
    }
    // Antipode of x through the center: farthest point of the whole ball
    double anti = 0;
    for (int i = 0; i < d; ++i)
        anti += (2 * c[i] - x[i]) * u[i];
    if (anti >= t)
        return to_center + rho;

    // Otherwise the maximum is on the rim sphere, centered at c + h u with
    // radius sqrt(rho^2 - h^2) inside the plane; split x - c' into its
    // components along u and within the plane
    double const rim = std::sqrt(std::max(0.0, rho * rho - h * h));
    double alpha = 0;
    for (int i = 0; i < d; ++i)
        alpha += (x[i] - c[i] - h * u[i]) * u[i];
    double w2 = 0;
    for (int i = 0; i < d; ++i)
    {
        double const wi = x[i] - c[i] - h * u[i] - alpha * u[i];
        w2 += wi * wi;
    }
    double const lateral = std::sqrt(w2) + rim;
    return std::sqrt(alpha * alpha + lateral * lateral);
}

//---------------------------------------------------------------------------//
/*!
 * Ellipsoid case in the preimage sphere: z = a * w with |w| = 1 and the
 * halfspace <z,u> >= t becomes the spherical cap <w, v> >= tau with
 * v = normalize(a * u).
 */
class EllipsoidCapAscent
{
  public:
    EllipsoidCapAscent(std::vector<double> const& axes, Coords x, Coords u, double t)
        : a_(axes), x_(x.begin(), x.end()), d_(static_cast<int>(axes.size()))
    {
        v_.resize(d_);
        for (int i = 0; i < d_; ++i)
            v_[i] = a_[i] * u[i];
        double const len = norm(v_);
        for (double& c : v_)
            c /= len;
        tau_ = std::clamp(t / len, -1.0, 1.0);
    }

    double solve() const
    {
        std::vector<std::vector<double>> starts{v_};
        for (int i = 0; i < d_; ++i)
        {
            for (double s : {1.0, -1.0})
            {
                std::vector<double> e(d_, 0.0);
                e[i] = s;
                starts.push_back(project(e));
            }
        }
        double best = 0;
        for (auto& w : starts)
            best = std::max(best, ascend(w));
        return std::sqrt(best);
    }

  private:
    std::vector<double> const& a_;
    std::vector<double> x_;
    int d_;
    std::vector<double> v_;
    double tau_{0};

    double objective(std::vector<double> const& w) const
    {
        double s = 0;
        for (int i = 0; i < d_; ++i)
            s += (a_[i] * w[i] - x_[i]) * (a_[i] * w[i] - x_[i]);
        return s;
    }

    std::vector<double> project(std::vector<double> y) const
    {
        double len = norm(y);
        if (!(len > 0))
            return v_;
        for (double& c : y)
            c /= len;
        double const along = dot(y, v_);
        if (along >= tau_)
            return y;
        // Nearest point of the rim circle in the plane of y and v
        for (int i = 0; i < d_; ++i)
            y[i] -= along * v_[i];
        len = norm(y);
        if (!(len > 1e-300))
        {
            // y antiparallel to v: any rim point is nearest
            int const j = static_cast<int>(
                std::min_element(v_.begin(), v_.end(),
                                 [](double p, double q) { return std::fabs(p) < std::fabs(q); })
                - v_.begin());
            std::fill(y.begin(), y.end(), 0.0);
            y[j] = 1;
            double const proj = v_[j];
            for (int i = 0; i < d_; ++i)
                y[i] -= proj * v_[i];
            len = norm(y);
        }
        double const s = std::sqrt(std::max(0.0, 1 - tau_ * tau_));
        for (int i = 0; i < d_; ++i)
            y[i] = tau_ * v_[i] + s * y[i] / len;
        return y;
    }

    double ascend(std::vector<double> w) const
    {
        double f = objective(w);
        double const amax = *std::max_element(a_.begin(), a_.end());
        double step = 0.5 / (amax * amax);
        std::vector<double> trial(d_);
        for (int iter = 0; iter < 20000 && step > 1e-14; ++iter)
        {
            for (int i = 0; i < d_; ++i)
                trial[i] = w[i] + step * 2 * a_[i] * (a_[i] * w[i] - x_[i]);
            auto next = project(trial);
            double const g = objective(next);
            if (g > f)
            {
                double const gain = g - f;
                w = std::move(next);
                f = g;
                step *= 1.5;
                if (gain < 1e-16 * std::max(1.0, f))
                    break;
            }
            else
            {
                step *= 0.5;
            }
        }
        return f;
    }
};

}  // namespace

//---------------------------------------------------------------------------//

std::int64_t ScoreTable::numerator_sum() const noexcept
{
    std::int64_t s = 0;
    for (auto c : counts)
        s += c;
    return s;
}

bool ScoreTable::sums_to(std::int64_t f) const noexcept
{
    return numerator_sum() == divisor() * f;
}

ScoreTable scores(HullComplex const& hull, int k)
{
    check_k(hull, k);
    Incidence const inc(hull);
    ScoreTable table;
    table.k = k;
    table.counts.assign(hull.points().size(), 0);
    for (auto v : hull.hull_vertices())
        table.counts[v] = count_star_faces(hull, inc.star(v), v, k);
    return table;
}

std::int64_t vertex_face_count(HullComplex const& hull, VertexIndex v, int k)
{
    check_k(hull, k);
    if (v >= hull.points().size())
        throw std::out_of_range("vertex_face_count: no such point");
    std::vector<FacetIndex> star;
    for (std::size_t f = 0; f < hull.num_facets(); ++f)
    {
        auto const vs = hull.facet(static_cast<FacetIndex>(f)).vertices;
        if (std::binary_search(vs.begin(), vs.end(), v))
            star.push_back(static_cast<FacetIndex>(f));
    }
    return count_star_faces(hull, star, v, k);
}

double farthest_in_cap(ConvexBodyModel const& body,
                       Coords x,
                       Coords normal,
                       double offset)
{
    if (body.kind() == BodyKind::ball)
        return farthest_in_ball_cap(body, x, normal, offset);
    return EllipsoidCapAscent(body.semi_axes(), x, normal, offset).solve();
}

StabilizationRecord stabilization_radius(ConvexBodyModel const& body,
                                         VertexIndex x,
                                         HullComplex const& hull)
{
    if (body.dimension() != hull.dimension())
        throw std::invalid_argument("stabilization_radius: dimension mismatch");
    StabilizationRecord rec;
    rec.point = x;
    bool found = false;
    Coords const px = hull.points()[x];
    for (std::size_t f = 0; f < hull.num_facets(); ++f)
    {
        auto const fv = hull.facet(static_cast<FacetIndex>(f));
        if (!std::binary_search(fv.vertices.begin(), fv.vertices.end(), x))
            continue;
        double const r = farthest_in_cap(body, px, fv.normal, fv.offset);
        if (!found || r > rec.radius)
        {
            rec.radius = r;
            rec.facet.assign(fv.vertices.begin(), fv.vertices.end());
        }
        found = true;
    }
    if (!found)
        throw std::invalid_argument("stabilization_radius: point "
                                    + std::to_string(x) + " is not a hull vertex");
    return rec;
}

TailResult radius_tail_experiment(ConvexBodyModel const& body, TailConfig const& cfg)
{
    int const d = body.dimension();
    if (cfg.n < d + 1)
        throw std::invalid_argument("radius_tail_experiment: need n >= d+1");
    if (cfg.replications < 100)
        throw std::invalid_argument("radius_tail_experiment: need M >= 100");

    TailResult result;
    result.radii.assign(cfg.replications, 0.0);
    detail::parallel_for(cfg.replications, cfg.threads, [&](std::size_t i) {
        RandomStream rng(derive_seed(cfg.seed, 0, i));
        auto const pts = body.sample_surface(rng, static_cast<std::size_t>(cfg.n));
        auto const hull = incremental_hull(pts);
        auto const& verts = hull.hull_vertices();
        VertexIndex const v = verts[rng.uniform_index(verts.size())];
        result.radii[i] = stabilization_radius(body, v, hull).radius;
    });

    double const m = static_cast<double>(cfg.replications);
    std::vector<double> xs;
    std::vector<double> ys;
    for (double r : cfg.r_grid)
    {
        auto const hits = std::count_if(result.radii.begin(), result.radii.end(),
                                        [r](double x) { return x >= r; });
        double const p = static_cast<double>(hits) / m;
        result.rows.push_back({r, cfg.n, p, std::sqrt(p * (1 - p) / m)});
        if (p >= 10 / m && p <= 0.5)
        {
            xs.push_back(std::pow(r, d - 1) * static_cast<double>(cfg.n));
            ys.push_back(std::log(p));
        }
    }
    result.points_in_window = xs.size();
    if (xs.size() < 2)
        throw InsufficientDataError("radius_tail_experiment: fewer than two grid "
                                    "points have survival in [10/M, 0.5]");
    auto const fit = fit_line(xs, ys);
    result.slope = fit.slope;
    result.intercept = fit.intercept;
    result.r_squared = fit.r_squared;
    return result;
}

MomentResult moment_experiment(ConvexBodyModel const& body, MomentConfig const& cfg)
{
    if (cfg.replications < 500)
        throw std::invalid_argument("moment_experiment: need M >= 500");
    for (int q : cfg.q_list)
    {
        if (q != 1 && q != 2 && q != 4)
            throw std::invalid_argument("moment_experiment: q must be 1, 2 or 4");
    }
    if (cfg.n_grid.empty() || cfg.q_list.empty())
        throw std::invalid_argument("moment_experiment: empty grid");
    int const d = body.dimension();
    if (cfg.k < 0 || cfg.k > d - 1)
        throw std::out_of_range("moment_experiment: k must be in [0, d-1]");

    MomentResult result;
    std::vector<std::vector<double>> by_n;
    for (std::size_t cell = 0; cell < cfg.n_grid.size(); ++cell)
    {
        std::int64_t const n = cfg.n_grid[cell];
        if (n < d + 1)
            throw std::invalid_argument("moment_experiment: need n >= d+1");
        std::vector<double> xi(cfg.replications);
        detail::parallel_for(cfg.replications, cfg.threads, [&](std::size_t i) {
            RandomStream rng(derive_seed(cfg.seed, cell, i));
            auto const pts = body.sample_surface(rng, static_cast<std::size_t>(n));
            auto const hull = incremental_hull(pts);
            xi[i] = static_cast<double>(vertex_face_count(hull, 0, cfg.k))
                    / static_cast<double>(cfg.k + 1);
        });
        std::vector<double> moments;
        for (int q : cfg.q_list)
        {
            std::vector<double> powered(xi.size());
            for (std::size_t i = 0; i < xi.size(); ++i)
                powered[i] = std::pow(xi[i], q);
            double const mu = mean(powered);
            double const se = std::sqrt(sample_variance(powered)
                                        / static_cast<double>(powered.size()));
            result.rows.push_back({n, q, mu, se});
            moments.push_back(mu);
        }
        by_n.push_back(std::move(moments));
    }
    auto const lo = std::min_element(cfg.n_grid.begin(), cfg.n_grid.end()) - cfg.n_grid.begin();
    auto const hi = std::max_element(cfg.n_grid.begin(), cfg.n_grid.end()) - cfg.n_grid.begin();
    for (std::size_t j = 0; j < cfg.q_list.size(); ++j)
    {
        if (by_n[hi][j] > 2 * by_n[lo][j])
            result.unbounded_flag = true;
    }
    return result;
}

}  // namespace rbp

#include "rbp/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rbp
{

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ks_to_normal(std::span<double const> sample)
{
    if (sample.empty())
        throw std::invalid_argument("ks_to_normal: empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    double const m = static_cast<double>(s.size());
    double dist = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        double const phi = normal_cdf(s[i]);
        double const above = static_cast<double>(i + 1) / m - phi;
        double const below = phi - static_cast<double>(i) / m;
        dist = std::max({dist, std::fabs(above), std::fabs(below)});
    }
    return std::min(dist, 1.0);
}

std::vector<double> self_normalize(std::span<double const> sample)
{
    double const mu = mean(sample);
    double ss = 0;
    for (double x : sample)
        ss += (x - mu) * (x - mu);
    double const sd = sample.empty() ? 0 : std::sqrt(ss / static_cast<double>(sample.size()));
    std::vector<double> z(sample.size(), 0.0);
    if (sd > 0)
    {
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = (sample[i] - mu) / sd;
    }
    return z;
}

LinearFit fit_line(std::span<double const> xs, std::span<double const> ys)
{
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line: need at least two (x, y) pairs");
    double const mx = mean(xs);
    double const my = mean(ys);
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0))
        throw std::invalid_argument("fit_line: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        double const r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    // A flat response is fit perfectly by slope zero
    fit.r_squared = syy > 0 ? 1 - ss_res / syy : 1;
    return fit;
}

LinearFit fit_power_law(std::span<double const> xs, std::span<double const> ys)
{
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("fit_power_law: need at least three pairs");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (!(xs[i] > 0) || !(ys[i] > 0))
            throw std::invalid_argument("fit_power_law: values must be positive");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    return fit_line(lx, ly);
}

double mean(std::span<double const> xs)
{
    if (xs.empty())
        return 0;
    double s = 0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<double const> xs)
{
    if (xs.size() < 2)
        return 0;
    double const mu = mean(xs);
    double ss = 0;
    for (double x : xs)
        ss += (x - mu) * (x - mu);
    return ss / static_cast<double>(xs.size() - 1);
}

double quantile_sorted(std::span<double const> sorted, double p)
{
    if (sorted.empty())
        throw std::invalid_argument("quantile: empty data");
    double const h = (static_cast<double>(sorted.size()) - 1) * std::clamp(p, 0.0, 1.0);
    auto const lo = static_cast<std::size_t>(std::floor(h));
    std::size_t const hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace rbp

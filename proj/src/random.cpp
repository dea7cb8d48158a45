#include "rbp/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbp
{

std::uint64_t RandomStream::uniform_index(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_index: empty range");
    // Reject the top partial block so every residue is equally likely
    std::uint64_t const limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do
    {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double RandomStream::normal()
{
    if (has_cached_)
    {
        has_cached_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do
    {
        u = 2 * uniform() - 1;
        v = 2 * uniform() - 1;
        s = u * u + v * v;
    } while (s >= 1 || s == 0);
    double const f = std::sqrt(-2 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_ = true;
    return u * f;
}

std::int64_t RandomStream::poisson(double mean)
{
    if (!(mean >= 0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be finite and >= 0");
    if (mean == 0)
        return 0;
    if (mean <= 30)
    {
        // Sequential search of the CDF
        double p = std::exp(-mean);
        double cdf = p;
        double const u = uniform();
        std::int64_t k = 0;
        while (u > cdf && k < 1000)
        {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    // Transformed rejection with squeeze (W. Hormann, 1993)
    double const slam = std::sqrt(mean);
    double const loglam = std::log(mean);
    double const b = 0.931 + 2.53 * slam;
    double const a = -0.059 + 0.02483 * b;
    double const invalpha = 1.1239 + 1.1328 / (b - 3.4);
    double const vr = 0.9277 - 3.6224 / (b - 2);
    while (true)
    {
        double const u = uniform() - 0.5;
        double const v = uniform();
        double const us = 0.5 - std::fabs(u);
        double const k = std::floor((2 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::int64_t>(k);
        if (k < 0 || (us < 0.013 && v > us))
            continue;
        int sign;
        double const lg = ::lgamma_r(k + 1, &sign);
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b)
            <= -mean + k * loglam - lg)
            return static_cast<std::int64_t>(k);
    }
}

}  // namespace rbp

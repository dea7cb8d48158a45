#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rbp/geometry.hpp"

namespace rbp::detail
{

//---------------------------------------------------------------------------//
/*!
 * Cofactors of the last row of a d x d matrix whose first d-1 rows are
 * fixed, together with the matching "permanent" cofactors of |entries|.
 *
 * For any last row y, det = sum_j y_j * cofactor[j]. The permanent terms give
 * a bound on the magnitude of every product in the Laplace expansion, which
 * is what the forward error bound of the filter is expressed in.
 */
struct LastRowCofactors
{
    std::array<double, kMaxDimension> cofactor{};
    std::array<double, kMaxDimension> permanent{};
};

//! Rounding operations along any term of the expansion, plus entry subtraction.
constexpr int expansion_depth(int d) noexcept
{
    return 2 * d - 1 + d * (d - 1) / 2;
}

//! Certified bound on |computed - exact| for a determinant of this dimension.
inline double determinant_error_bound(int d, double permanent) noexcept
{
    constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2;
    // Absolute term absorbs gradual underflow in intermediate products
    constexpr double underflow = std::numeric_limits<double>::denorm_min();
    double const n = expansion_depth(d);
    return 1.01 * n * unit_roundoff * permanent + 4 * n * underflow;
}

/*!
 * Precomputed Laplace expansion schedule for one dimension.
 *
 * Minors of the leading k rows are indexed by column subsets (bitmasks).
 * Steps visit the subsets of size 1..d-1 in increasing numeric order, so each
 * step only reads minors of smaller subsets. Every term multiplies an entry
 * of row k-1 by a minor one size smaller, with the cofactor sign folded in.
 */
struct ExpansionPlan
{
    struct Term
    {
        std::uint16_t rest;
        std::uint8_t column;
        bool negate;
    };
    struct Step
    {
        std::uint16_t mask;
        std::uint8_t row;
        std::uint16_t first_term;
        std::uint8_t num_terms;
    };
    std::vector<Step> steps;
    std::vector<Term> terms;
};

inline ExpansionPlan make_expansion_plan(int d)
{
    ExpansionPlan plan;
    unsigned const full = (1u << d) - 1;
    for (unsigned mask = 1; mask < full; ++mask)
    {
        int const k = std::popcount(mask);
        if (k > d - 1)
            continue;
        ExpansionPlan::Step step{static_cast<std::uint16_t>(mask),
                                 static_cast<std::uint8_t>(k - 1),
                                 static_cast<std::uint16_t>(plan.terms.size()),
                                 0};
        int pos = 0;
        for (int j = 0; j < d; ++j)
        {
            unsigned const bit = 1u << j;
            if (!(mask & bit))
                continue;
            plan.terms.push_back({static_cast<std::uint16_t>(mask ^ bit),
                                  static_cast<std::uint8_t>(j),
                                  ((k - 1 + pos) & 1) != 0});
            ++pos;
            ++step.num_terms;
        }
        plan.steps.push_back(step);
    }
    return plan;
}

inline ExpansionPlan const& expansion_plan(int d)
{
    static std::array<ExpansionPlan, kMaxDimension + 1> const plans = [] {
        std::array<ExpansionPlan, kMaxDimension + 1> p;
        for (int d = 1; d <= kMaxDimension; ++d)
            p[d] = make_expansion_plan(d);
        return p;
    }();
    return plans[d];
}

/*!
 * Compute last-row cofactors from d-1 rows given as differences of points
 * against an origin point.
 *
 * Rows are rows[i] - origin for i in [0, d-1).
 */
inline LastRowCofactors
last_row_cofactors(int d, Coords origin, std::span<Coords const> rows) noexcept
{
    std::array<double, kMaxDimension * kMaxDimension> a;
    for (int i = 0; i + 1 < d; ++i)
    {
        for (int j = 0; j < d; ++j)
        {
            a[i * d + j] = rows[i][j] - origin[j];
        }
    }

    ExpansionPlan const& plan = expansion_plan(d);
    std::array<double, (1u << kMaxDimension)> minor;
    std::array<double, (1u << kMaxDimension)> perm;
    minor[0] = 1;
    perm[0] = 1;
    for (auto const& step : plan.steps)
    {
        double const* row = &a[step.row * d];
        double m = 0;
        double p = 0;
        auto const* term = plan.terms.data() + step.first_term;
        for (int t = 0; t < step.num_terms; ++t, ++term)
        {
            double const entry = row[term->column];
            double const product = entry * minor[term->rest];
            m += term->negate ? -product : product;
            p += std::fabs(entry) * perm[term->rest];
        }
        minor[step.mask] = m;
        perm[step.mask] = p;
    }

    unsigned const full = (1u << d) - 1;
    LastRowCofactors result;
    for (int j = 0; j < d; ++j)
    {
        unsigned const rest = full ^ (1u << j);
        double const c = minor[rest];
        result.cofactor[j] = ((d - 1 + j) & 1) ? -c : c;
        result.permanent[j] = perm[rest];
    }
    return result;
}

/*!
 * Same expansion with the dimension fixed at compile time.
 *
 * The schedule is a constant table, so the loops fully unroll for small D.
 */
template<int D>
struct FixedExpansion
{
    static constexpr int num_steps = (1 << D) - 2;
    static constexpr int num_terms = D * ((1 << (D - 1)) - 1);

    struct Tables
    {
        std::array<ExpansionPlan::Step, num_steps> steps{};
        std::array<ExpansionPlan::Term, num_terms> terms{};
    };

    static constexpr Tables make()
    {
        Tables t{};
        int ns = 0;
        int nt = 0;
        for (unsigned mask = 1; mask < (1u << D) - 1; ++mask)
        {
            int const k = std::popcount(mask);
            t.steps[ns] = {static_cast<std::uint16_t>(mask),
                           static_cast<std::uint8_t>(k - 1),
                           static_cast<std::uint16_t>(nt),
                           static_cast<std::uint8_t>(k)};
            int pos = 0;
            for (int j = 0; j < D; ++j)
            {
                unsigned const bit = 1u << j;
                if (!(mask & bit))
                    continue;
                t.terms[nt++] = {static_cast<std::uint16_t>(mask ^ bit),
                                 static_cast<std::uint8_t>(j),
                                 ((k - 1 + pos) & 1) != 0};
                ++pos;
            }
            ++ns;
        }
        return t;
    }

    static constexpr Tables tables = make();

    //! rows points to D-1 coordinate arrays of length D
    static LastRowCofactors compute(double const* origin,
                                    double const* const* rows) noexcept
    {
        double a[D > 1 ? D - 1 : 1][D];
        for (int i = 0; i + 1 < D; ++i)
        {
            for (int j = 0; j < D; ++j)
                a[i][j] = rows[i][j] - origin[j];
        }
        double minor[1 << D];
        double perm[1 << D];
        minor[0] = 1;
        perm[0] = 1;
#pragma GCC unroll 256
        for (int s = 0; s < num_steps; ++s)
        {
            auto const& step = tables.steps[s];
            double m = 0;
            double p = 0;
#pragma GCC unroll 16
            for (int t = 0; t < step.num_terms; ++t)
            {
                auto const& term = tables.terms[step.first_term + t];
                double const entry = a[step.row][term.column];
                double const product = entry * minor[term.rest];
                m += term.negate ? -product : product;
                p += std::fabs(entry) * perm[term.rest];
            }
            minor[step.mask] = m;
            perm[step.mask] = p;
        }
        constexpr unsigned full = (1u << D) - 1;
        LastRowCofactors result;
        for (int j = 0; j < D; ++j)
        {
            double const c = minor[full ^ (1u << j)];
            result.cofactor[j] = ((D - 1 + j) & 1) ? -c : c;
            result.permanent[j] = perm[full ^ (1u << j)];
        }
        return result;
    }
};

/*!
 * Filtered sign of sum_j (x_j - origin_j) * cofactor[j].
 *
 * Returns nullopt when the rounded value does not exceed the error bound or
 * when intermediate values are not finite.
 */
inline std::optional<int> filtered_last_row_sign(int d,
                                                 LastRowCofactors const& c,
                                                 Coords origin,
                                                 Coords x) noexcept
{
    double det = 0;
    double perm = 0;
    for (int j = 0; j < d; ++j)
    {
        double const y = x[j] - origin[j];
        det += y * c.cofactor[j];
        perm += std::fabs(y) * c.permanent[j];
    }
    if (!std::isfinite(det) || !std::isfinite(perm))
        return std::nullopt;
    double const bound = determinant_error_bound(d, perm);
    if (det > bound)
        return 1;
    if (det < -bound)
        return -1;
    return std::nullopt;
}

//! Sign of (-1)^d, converting a difference determinant to an orientation.
constexpr int orientation_parity(int d) noexcept
{
    return (d & 1) ? -1 : 1;
}

}  // namespace rbp::detail

#include "exact.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace rbp::detail
{
namespace
{

struct Dyadic
{
    std::int64_t mantissa{0};
    int exponent{0};
};

Dyadic decompose(double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("non-finite coordinate in exact predicate");
    if (x == 0)
        return {};
    int e = 0;
    double const m = std::frexp(x, &e);
    // m in [0.5, 1): 53 significant bits become an exact integer
    return {static_cast<std::int64_t>(std::ldexp(m, 53)), e - 53};
}

/*!
 * Integer matrix of the difference rows p_i - p_0, i = 1..rows, scaled by a
 * common power of two. Sign and rank are scale invariant.
 */
std::vector<std::vector<mpz_class>>
scaled_differences(std::span<Coords const> points)
{
    std::size_t const d = points.front().size();
    std::vector<std::vector<Dyadic>> dy(points.size(), std::vector<Dyadic>(d));
    int emin = INT_MAX;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        for (std::size_t j = 0; j < d; ++j)
        {
            dy[i][j] = decompose(points[i][j]);
            if (dy[i][j].mantissa != 0)
                emin = std::min(emin, dy[i][j].exponent);
        }
    }

    auto to_int = [emin](Dyadic v) {
        mpz_class z(static_cast<long>(v.mantissa));
        if (v.mantissa != 0)
            mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(),
                         static_cast<mp_bitcnt_t>(v.exponent - emin));
        return z;
    };

    std::vector<std::vector<mpz_class>> rows(points.size() - 1,
                                             std::vector<mpz_class>(d));
    for (std::size_t i = 1; i < points.size(); ++i)
    {
        for (std::size_t j = 0; j < d; ++j)
        {
            rows[i - 1][j] = to_int(dy[i][j]) - to_int(dy[0][j]);
        }
    }
    return rows;
}

/*!
 * Fraction-free (Bareiss) elimination. Returns the rank; for square input
 * also stores the determinant sign.
 */
int bareiss(std::vector<std::vector<mpz_class>>& m, int* det_sign)
{
    std::size_t const rows = m.size();
    std::size_t const cols = rows ? m.front().size() : 0;
    mpz_class prev = 1;
    int sign = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c)
    {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        if (pivot != r)
        {
            std::swap(m[pivot], m[r]);
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i)
        {
            for (std::size_t j = c + 1; j < cols; ++j)
            {
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]);
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(),
                             prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        ++r;
    }
    if (det_sign)
    {
        if (r < rows || rows != cols)
            *det_sign = 0;
        else
            *det_sign = sign * sgn(m[rows - 1][cols - 1]);
    }
    return static_cast<int>(r);
}

}  // namespace

int exact_orientation_sign(std::span<Coords const> simplex)
{
    auto const d = static_cast<int>(simplex.front().size());
    auto m = scaled_differences(simplex);
    int det_sign = 0;
    bareiss(m, &det_sign);
    // Row-reducing the augmented matrix against p_0 and expanding along the
    // column of ones contributes (-1)^d
    return (d & 1) ? -det_sign : det_sign;
}

int exact_affine_rank(std::span<Coords const> points)
{
    if (points.empty())
        return -1;
    if (points.size() == 1)
        return 0;
    auto m = scaled_differences(points);
    return bareiss(m, nullptr);
}

}  // namespace rbp::detail

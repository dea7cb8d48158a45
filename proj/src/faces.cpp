#include "rbp/faces.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <stdexcept>
#include <string>

namespace rbp
{
namespace
{

//! Visit every (width)-subset of a sorted facet tuple in lexicographic order.
template<class F>
void for_each_subset(std::span<VertexIndex const> facet, int width, F&& visit)
{
    int const d = static_cast<int>(facet.size());
    std::array<int, kMaxDimension> idx;
    for (int i = 0; i < width; ++i)
        idx[i] = i;
    std::array<VertexIndex, kMaxDimension> tuple;
    while (true)
    {
        for (int i = 0; i < width; ++i)
            tuple[i] = facet[idx[i]];
        visit(std::span<VertexIndex const>(tuple.data(), width));
        int i = width - 1;
        while (i >= 0 && idx[i] == d - width + i)
            --i;
        if (i < 0)
            return;
        ++idx[i];
        for (int j = i + 1; j < width; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

bool FaceList::contains(std::span<VertexIndex const> face) const
{
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi)
    {
        std::size_t const mid = (lo + hi) / 2;
        auto const f = (*this)[mid];
        if (std::lexicographical_compare(f.begin(), f.end(), face.begin(),
                                         face.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo < size() && std::ranges::equal((*this)[lo], face);
}

FaceList enumerate_k_faces(HullComplex const& hull, int k)
{
    int const d = hull.dimension();
    if (k < 0 || k > d - 1)
        throw std::out_of_range("enumerate_k_faces: k must be in [0, d-1], got "
                                + std::to_string(k));
    int const width = k + 1;
    std::size_t const nf = hull.num_facets();

    int const bits = std::max(1, static_cast<int>(std::bit_width(
                                     static_cast<std::uint64_t>(
                                         hull.points().size()))));
    std::vector<VertexIndex> flat;
    if (width * bits <= 64)
    {
        // Pack tuples into integers whose order matches lexicographic order
        std::vector<std::uint64_t> codes;
        codes.reserve(nf * static_cast<std::size_t>(binomial(d, width)));
        for (std::size_t f = 0; f < nf; ++f)
        {
            for_each_subset(hull.facet(static_cast<FacetIndex>(f)).vertices,
                            width, [&](std::span<VertexIndex const> t) {
                                std::uint64_t c = 0;
                                for (auto v : t)
                                    c = (c << bits) | v;
                                codes.push_back(c);
                            });
        }
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
        flat.resize(codes.size() * width);
        std::uint64_t const mask = (bits == 64) ? ~0ull : ((1ull << bits) - 1);
        for (std::size_t i = 0; i < codes.size(); ++i)
        {
            std::uint64_t c = codes[i];
            for (int j = width - 1; j >= 0; --j)
            {
                flat[i * width + j] = static_cast<VertexIndex>(c & mask);
                c >>= bits;
            }
        }
    }
    else
    {
        std::vector<std::vector<VertexIndex>> tuples;
        for (std::size_t f = 0; f < nf; ++f)
        {
            for_each_subset(hull.facet(static_cast<FacetIndex>(f)).vertices,
                            width, [&](std::span<VertexIndex const> t) {
                                tuples.emplace_back(t.begin(), t.end());
                            });
        }
        std::sort(tuples.begin(), tuples.end());
        tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
        for (auto const& t : tuples)
            flat.insert(flat.end(), t.begin(), t.end());
    }
    return FaceList(width, std::move(flat));
}

FVector f_vector(HullComplex const& hull)
{
    int const d = hull.dimension();
    FVector f;
    f.counts.resize(d);
    f.counts[0] = static_cast<std::int64_t>(hull.hull_vertices().size());
    for (int k = 1; k < d - 1; ++k)
        f.counts[k] = static_cast<std::int64_t>(enumerate_k_faces(hull, k).size());
    f.counts[d - 1] = static_cast<std::int64_t>(hull.num_facets());
    return f;
}

bool euler_check(FVector const& f, int d)
{
    if (f.dimension() != d)
        return false;
    std::int64_t sum = 0;
    for (int i = 0; i < d; ++i)
        sum += (i & 1) ? -f.counts[i] : f.counts[i];
    return sum == ((d & 1) ? 2 : 0);
}

bool dehn_sommerville_check(FVector const& f, int d)
{
    if (f.dimension() != d)
        return false;
    for (int k = 0; k < d; ++k)
    {
        std::int64_t sum = 0;
        for (int i = k; i < d; ++i)
        {
            std::int64_t const term = binomial(i + 1, k + 1) * f.counts[i];
            sum += (i & 1) ? -term : term;
        }
        std::int64_t const rhs = ((d - 1) & 1) ? -f.counts[k] : f.counts[k];
        if (sum != rhs)
            return false;
    }
    return true;
}

std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

}  // namespace rbp

#include "rbp/hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "detail/exact.hpp"
#include "detail/predicates.hpp"
#include "rbp/error.hpp"

namespace rbp
{
namespace
{

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void check_input(PointSet const& points)
{
    int const d = points.dimension();
    if (d < 2 || d > kMaxDimension)
        throw std::invalid_argument("hull: dimension must be in [2, "
                                    + std::to_string(kMaxDimension) + "]");
    if (points.size() < static_cast<std::size_t>(d) + 1)
        throw std::invalid_argument("hull: need at least d+1 points");
    if (points.size() >= kNone)
        throw std::invalid_argument("hull: too many points");
}

template<class Range>
std::vector<std::size_t> as_indices(Range const& v, std::size_t extra = kNone)
{
    std::vector<std::size_t> out(v.begin(), v.end());
    if (extra != kNone)
        out.push_back(extra);
    return out;
}

/*!
 * Outward normal and offset from outward-oriented last-row cofactors.
 */
void write_plane(int d,
                 double const* outward,
                 Coords origin,
                 double* normal,
                 double* offset)
{
    double len = 0;
    for (int j = 0; j < d; ++j)
        len += outward[j] * outward[j];
    len = std::sqrt(len);
    double t = 0;
    for (int j = 0; j < d; ++j)
    {
        normal[j] = len > 0 ? outward[j] / len : 0;
        t += normal[j] * origin[j];
    }
    *offset = t;
}

//---------------------------------------------------------------------------//
/*!
 * Incremental beneath-beyond construction.
 *
 * Facets live in a pool with stride D. Each pending point is threaded onto
 * the intrusive conflict list of exactly one facet it is beyond. Inserting a
 * point searches the visible region from that facet, replaces it by a cone
 * over the horizon, and redistributes the orphaned conflict points over the
 * new facets.
 */
template<int D>
class IncrementalBuilder
{
  public:
    explicit IncrementalBuilder(PointSet const& points)
        : pts_(points)
        , coords_(points.flat().data())
        , n_(points.size())
        , point_facet_(n_, kNone)
        , next_conflict_(n_, kNone)
    {
    }

    HullComplex build();

  private:
    using Verts = std::array<VertexIndex, D>;

    PointSet const& pts_;
    double const* coords_;
    std::size_t n_;

    // Facet pool
    std::vector<Verts> fv_;
    std::vector<std::array<FacetIndex, D>> fn_;
    // Outward-oriented last-row cofactors and their permanents
    std::vector<std::array<double, D>> outward_;
    std::vector<std::array<double, D>> perm_;
    std::vector<std::array<double, D>> normal_;
    std::vector<double> offset_;
    std::vector<std::int8_t> sign_;  // orientation(facet, interior point)
    std::vector<std::uint8_t> alive_;
    std::vector<std::uint32_t> conflict_head_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint8_t> visible_;
    std::vector<FacetIndex> free_;
    std::uint32_t current_stamp_{0};

    // Points
    std::vector<std::uint32_t> point_facet_;
    std::vector<std::uint32_t> next_conflict_;

    // Scratch reused across insertions
    std::vector<FacetIndex> visible_list_;
    std::vector<FacetIndex> stack_;
    std::vector<std::pair<FacetIndex, int>> horizon_;
    std::vector<FacetIndex> new_facets_;
    struct RidgeKey
    {
        std::array<VertexIndex, (D > 2 ? D - 2 : 1)> key;
        FacetIndex facet;
        int slot;
    };
    std::vector<RidgeKey> ridge_keys_;

    double const* coords(VertexIndex v) const
    {
        return coords_ + static_cast<std::size_t>(v) * D;
    }

    FacetIndex allocate();
    FacetIndex make_facet(Verts const& verts, int sign);
    int side(FacetIndex f, VertexIndex q) const;
    void add_conflict(FacetIndex f, VertexIndex q);
    void assign(VertexIndex q, std::span<FacetIndex const> candidates);
    std::vector<VertexIndex> initial_simplex() const;
    void insert(VertexIndex p);
    [[noreturn]] void degenerate(FacetIndex f, VertexIndex q) const;
};

template<int D>
FacetIndex IncrementalBuilder<D>::allocate()
{
    if (!free_.empty())
    {
        FacetIndex f = free_.back();
        free_.pop_back();
        return f;
    }
    auto const f = static_cast<FacetIndex>(alive_.size());
    fv_.emplace_back();
    fn_.emplace_back();
    outward_.emplace_back();
    perm_.emplace_back();
    normal_.emplace_back();
    offset_.push_back(0);
    sign_.push_back(0);
    alive_.push_back(0);
    conflict_head_.push_back(kNone);
    stamp_.push_back(0);
    visible_.push_back(0);
    return f;
}

template<int D>
FacetIndex IncrementalBuilder<D>::make_facet(Verts const& verts, int sign)
{
    FacetIndex const f = allocate();
    fv_[f] = verts;
    fn_[f].fill(kNone);
    double const* rows[D > 1 ? D - 1 : 1];
    for (int i = 1; i < D; ++i)
        rows[i - 1] = coords(verts[i]);
    double const* origin = coords(verts[0]);
    auto const cof = detail::FixedExpansion<D>::compute(origin, rows);
    double const flip = -detail::orientation_parity(D) * sign;
    double len = 0;
    for (int j = 0; j < D; ++j)
    {
        outward_[f][j] = flip * cof.cofactor[j];
        perm_[f][j] = cof.permanent[j];
        len += cof.cofactor[j] * cof.cofactor[j];
    }
    len = std::sqrt(len);
    double t = 0;
    for (int j = 0; j < D; ++j)
    {
        normal_[f][j] = len > 0 ? outward_[f][j] / len : 0;
        t += normal_[f][j] * origin[j];
    }
    offset_[f] = t;
    sign_[f] = static_cast<std::int8_t>(sign);
    alive_[f] = 1;
    conflict_head_[f] = kNone;
    return f;
}

//! +1 beyond, -1 beneath, 0 on the facet span (exact)
template<int D>
int IncrementalBuilder<D>::side(FacetIndex f, VertexIndex q) const
{
    double const* origin = coords(fv_[f][0]);
    double const* x = coords(q);
    double det = 0;
    double perm = 0;
    for (int j = 0; j < D; ++j)
    {
        double const y = x[j] - origin[j];
        det += y * outward_[f][j];
        perm += std::fabs(y) * perm_[f][j];
    }
    if (std::isfinite(det) && std::isfinite(perm))
    {
        double const bound = detail::determinant_error_bound(D, perm);
        if (det > bound)
            return 1;
        if (det < -bound)
            return -1;
    }
    std::array<Coords, D + 1> seq;
    for (int i = 0; i < D; ++i)
        seq[i] = pts_[fv_[f][i]];
    seq[D] = pts_[q];
    int const o = detail::exact_orientation_sign(seq);
    if (o == 0)
        return 0;
    return o == sign_[f] ? -1 : 1;
}

template<int D>
void IncrementalBuilder<D>::degenerate(FacetIndex f, VertexIndex q) const
{
    throw GeneralPositionError(
        "point " + std::to_string(q) + " lies on a facet span",
        as_indices(fv_[f], q));
}

template<int D>
void IncrementalBuilder<D>::add_conflict(FacetIndex f, VertexIndex q)
{
    next_conflict_[q] = conflict_head_[f];
    conflict_head_[f] = q;
    point_facet_[q] = f;
}

template<int D>
void IncrementalBuilder<D>::assign(VertexIndex q,
                                   std::span<FacetIndex const> candidates)
{
    // Rounded distance picks the most promising candidate; exact test decides
    double const* x = coords(q);
    FacetIndex best = kNone;
    double best_dist = -std::numeric_limits<double>::infinity();
    for (FacetIndex f : candidates)
    {
        double s = -offset_[f];
        for (int j = 0; j < D; ++j)
            s += normal_[f][j] * x[j];
        if (s > best_dist)
        {
            best_dist = s;
            best = f;
        }
    }
    auto check = [&](FacetIndex f) {
        int const s = side(f, q);
        if (s == 0)
            degenerate(f, q);
        return s > 0;
    };
    if (best != kNone && check(best))
    {
        add_conflict(best, q);
        return;
    }
    for (FacetIndex f : candidates)
    {
        if (f != best && check(f))
        {
            add_conflict(f, q);
            return;
        }
    }
    point_facet_[q] = kNone;
}

template<int D>
std::vector<VertexIndex> IncrementalBuilder<D>::initial_simplex() const
{
    std::vector<VertexIndex> chosen{0};
    std::vector<Coords> trial{pts_[0]};
    for (std::size_t i = 1; i < n_ && chosen.size() < D + 1; ++i)
    {
        trial.push_back(pts_[i]);
        if (detail::exact_affine_rank(trial)
            == static_cast<int>(trial.size()) - 1)
        {
            chosen.push_back(static_cast<VertexIndex>(i));
        }
        else
        {
            trial.pop_back();
        }
    }
    if (chosen.size() < D + 1)
    {
        std::vector<std::size_t> all(n_);
        for (std::size_t i = 0; i < n_; ++i)
            all[i] = i;
        throw GeneralPositionError("all points are affinely dependent",
                                   std::move(all));
    }
    return chosen;
}

template<int D>
void IncrementalBuilder<D>::insert(VertexIndex p)
{
    ++current_stamp_;
    visible_list_.clear();
    horizon_.clear();
    stack_.clear();

    FacetIndex const start = point_facet_[p];
    stamp_[start] = current_stamp_;
    visible_[start] = 1;
    stack_.push_back(start);
    visible_list_.push_back(start);
    while (!stack_.empty())
    {
        FacetIndex const f = stack_.back();
        stack_.pop_back();
        for (int i = 0; i < D; ++i)
        {
            FacetIndex const g = fn_[f][i];
            if (stamp_[g] == current_stamp_)
            {
                if (!visible_[g])
                    horizon_.emplace_back(f, i);
                continue;
            }
            int const s = side(g, p);
            if (s == 0)
                degenerate(g, p);
            stamp_[g] = current_stamp_;
            visible_[g] = s > 0;
            if (s > 0)
            {
                stack_.push_back(g);
                visible_list_.push_back(g);
            }
            else
            {
                horizon_.emplace_back(f, i);
            }
        }
    }

    // Cone over the horizon
    new_facets_.clear();
    ridge_keys_.clear();
    for (auto const& [f, i] : horizon_)
    {
        Verts verts = fv_[f];
        verts[i] = p;
        std::sort(verts.begin(), verts.end());
        int const j = static_cast<int>(
            std::find(verts.begin(), verts.end(), p) - verts.begin());
        // Permutation parity relating orientation(f, p) to orientation(f', v_i)
        int const sign = ((i + j) & 1) ? -sign_[f] : sign_[f];
        FacetIndex const g = fn_[f][i];
        FacetIndex const nf = make_facet(verts, sign);
        new_facets_.push_back(nf);

        fn_[nf][j] = g;
        for (int k = 0; k < D; ++k)
        {
            if (fn_[g][k] == f)
            {
                fn_[g][k] = nf;
                break;
            }
        }
        for (int s = 0; s < D; ++s)
        {
            if (s == j)
                continue;
            RidgeKey rk{{}, nf, s};
            int m = 0;
            for (int t = 0; t < D; ++t)
            {
                if (t != s && t != j)
                    rk.key[m++] = verts[t];
            }
            ridge_keys_.push_back(rk);
        }
    }

    std::sort(ridge_keys_.begin(), ridge_keys_.end(),
              [](RidgeKey const& a, RidgeKey const& b) { return a.key < b.key; });
    for (std::size_t r = 0; r < ridge_keys_.size(); r += 2)
    {
        auto const& a = ridge_keys_[r];
        if (r + 1 >= ridge_keys_.size() || a.key != ridge_keys_[r + 1].key)
        {
            throw GeneralPositionError("horizon is not a closed ridge cycle "
                                       "while inserting point "
                                       + std::to_string(p),
                                       {p});
        }
        auto const& b = ridge_keys_[r + 1];
        fn_[a.facet][a.slot] = b.facet;
        fn_[b.facet][b.slot] = a.facet;
    }

    // Redistribute orphaned conflict points, then retire the visible facets
    for (FacetIndex f : visible_list_)
    {
        std::uint32_t q = conflict_head_[f];
        while (q != kNone)
        {
            std::uint32_t const next = next_conflict_[q];
            if (q != p)
                assign(q, new_facets_);
            q = next;
        }
        conflict_head_[f] = kNone;
    }
    for (FacetIndex f : visible_list_)
    {
        alive_[f] = 0;
        free_.push_back(f);
    }
    point_facet_[p] = kNone;
}

template<int D>
HullComplex IncrementalBuilder<D>::build()
{
    auto const simplex = initial_simplex();
    std::vector<std::uint8_t> in_simplex(n_, 0);
    for (auto v : simplex)
        in_simplex[v] = 1;

    std::vector<FacetIndex> initial;
    for (int i = 0; i <= D; ++i)
    {
        Verts verts{};
        int m = 0;
        for (int k = 0; k <= D; ++k)
        {
            if (k != i)
                verts[m++] = simplex[k];
        }
        std::array<Coords, D + 1> seq;
        for (int k = 0; k < D; ++k)
            seq[k] = pts_[verts[k]];
        seq[D] = pts_[simplex[i]];
        initial.push_back(make_facet(verts, orientation(seq)));
    }
    // Facet i omits simplex[i]; its ridge opposite simplex[k] borders facet k
    for (int i = 0; i <= D; ++i)
    {
        for (int s = 0; s < D; ++s)
        {
            VertexIndex const v = fv_[initial[i]][s];
            int const k = static_cast<int>(
                std::find(simplex.begin(), simplex.end(), v) - simplex.begin());
            fn_[initial[i]][s] = initial[k];
        }
    }

    for (std::size_t q = 0; q < n_; ++q)
    {
        if (!in_simplex[q])
            assign(static_cast<VertexIndex>(q), initial);
    }
    for (std::size_t q = 0; q < n_; ++q)
    {
        if (point_facet_[q] != kNone)
            insert(static_cast<VertexIndex>(q));
    }

    // Compact the live facets in pool order
    std::vector<FacetIndex> remap(alive_.size(), kNone);
    std::size_t live = 0;
    for (std::size_t f = 0; f < alive_.size(); ++f)
    {
        if (alive_[f])
            remap[f] = static_cast<FacetIndex>(live++);
    }
    std::vector<VertexIndex> verts;
    std::vector<FacetIndex> nbrs;
    std::vector<double> normals;
    std::vector<double> offsets;
    verts.reserve(live * D);
    nbrs.reserve(live * D);
    normals.reserve(live * D);
    offsets.reserve(live);
    for (std::size_t f = 0; f < alive_.size(); ++f)
    {
        if (!alive_[f])
            continue;
        for (int i = 0; i < D; ++i)
        {
            verts.push_back(fv_[f][i]);
            nbrs.push_back(remap[fn_[f][i]]);
            normals.push_back(normal_[f][i]);
        }
        offsets.push_back(offset_[f]);
    }
    return HullComplex(pts_, std::move(verts), std::move(nbrs),
                       std::move(normals), std::move(offsets));
}

template<int D>
HullComplex build_incremental(PointSet const& points)
{
    if constexpr (D > kMaxDimension)
    {
        throw std::invalid_argument("hull: unsupported dimension");
    }
    else
    {
        if (points.dimension() == D)
            return IncrementalBuilder<D>(points).build();
        return build_incremental<D + 1>(points);
    }
}

//---------------------------------------------------------------------------//
//! Assign neighbors by pairing facets across shared ridges.
std::vector<FacetIndex>
pair_ridges(int d, std::vector<VertexIndex> const& facet_vertices)
{
    std::size_t const nf = facet_vertices.size() / d;
    std::vector<FacetIndex> nbrs(facet_vertices.size(), kNone);
    std::map<std::vector<VertexIndex>, std::vector<std::pair<FacetIndex, int>>>
        ridges;
    for (std::size_t f = 0; f < nf; ++f)
    {
        for (int s = 0; s < d; ++s)
        {
            std::vector<VertexIndex> key;
            for (int t = 0; t < d; ++t)
            {
                if (t != s)
                    key.push_back(facet_vertices[f * d + t]);
            }
            ridges[key].emplace_back(static_cast<FacetIndex>(f), s);
        }
    }
    for (auto const& [key, owners] : ridges)
    {
        if (owners.size() != 2)
            throw GeneralPositionError("ridge not shared by exactly two facets");
        nbrs[owners[0].first * d + owners[0].second] = owners[1].first;
        nbrs[owners[1].first * d + owners[1].second] = owners[0].first;
    }
    return nbrs;
}

}  // namespace

//---------------------------------------------------------------------------//
HullComplex::HullComplex(PointSet points,
                         std::vector<VertexIndex> facet_vertices,
                         std::vector<FacetIndex> facet_neighbors,
                         std::vector<double> normals,
                         std::vector<double> offsets)
    : dim_(points.dimension())
    , points_(std::move(points))
    , facet_vertices_(std::move(facet_vertices))
    , facet_neighbors_(std::move(facet_neighbors))
    , normals_(std::move(normals))
    , offsets_(std::move(offsets))
{
    std::vector<std::uint8_t> mark(points_.size(), 0);
    for (auto v : facet_vertices_)
        mark[v] = 1;
    for (std::size_t i = 0; i < mark.size(); ++i)
    {
        if (mark[i])
            hull_vertices_.push_back(static_cast<VertexIndex>(i));
    }
}

FacetView HullComplex::facet(FacetIndex f) const noexcept
{
    std::size_t const base = static_cast<std::size_t>(f) * dim_;
    std::size_t const d = dim_;
    return {{facet_vertices_.data() + base, d},
            {facet_neighbors_.data() + base, d},
            {normals_.data() + base, d},
            offsets_[f]};
}

std::vector<std::vector<VertexIndex>> HullComplex::facet_sets() const
{
    std::vector<std::vector<VertexIndex>> out;
    out.reserve(num_facets());
    for (std::size_t f = 0; f < num_facets(); ++f)
    {
        auto v = facet(static_cast<FacetIndex>(f)).vertices;
        out.emplace_back(v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool HullComplex::is_closed_pseudomanifold() const
{
    std::size_t const d = dim_;
    for (std::size_t f = 0; f < num_facets(); ++f)
    {
        auto const fv = facet(static_cast<FacetIndex>(f));
        for (std::size_t i = 0; i < d; ++i)
        {
            FacetIndex const g = fv.neighbors[i];
            if (g >= num_facets() || g == f)
                return false;
            auto const gv = facet(g);
            // Shared ridge is fv.vertices minus fv.vertices[i]
            std::size_t shared = 0;
            std::size_t back = d;
            for (std::size_t k = 0; k < d; ++k)
            {
                if (gv.neighbors[k] == f)
                    back = k;
                if (k != i
                    && std::binary_search(gv.vertices.begin(),
                                          gv.vertices.end(), fv.vertices[k]))
                    ++shared;
            }
            if (back == d || shared != d - 1
                || std::binary_search(gv.vertices.begin(), gv.vertices.end(),
                                      fv.vertices[i]))
                return false;
        }
    }
    // Each ridge in exactly two facets
    std::map<std::vector<VertexIndex>, int> count;
    for (std::size_t f = 0; f < num_facets(); ++f)
    {
        auto const fv = facet(static_cast<FacetIndex>(f));
        for (std::size_t s = 0; s < d; ++s)
        {
            std::vector<VertexIndex> key;
            for (std::size_t t = 0; t < d; ++t)
            {
                if (t != s)
                    key.push_back(fv.vertices[t]);
            }
            ++count[key];
        }
    }
    return std::all_of(count.begin(), count.end(),
                       [](auto const& kv) { return kv.second == 2; });
}

//---------------------------------------------------------------------------//
HullComplex incremental_hull(PointSet const& points)
{
    check_input(points);
    return build_incremental<2>(points);
}

HullComplex brute_force_hull(PointSet const& points)
{
    check_input(points);
    int const d = points.dimension();
    std::size_t const n = points.size();

    std::vector<VertexIndex> facet_vertices;
    std::vector<double> normals;
    std::vector<double> offsets;

    std::vector<VertexIndex> subset(d);
    for (int i = 0; i < d; ++i)
        subset[i] = static_cast<VertexIndex>(i);
    std::array<Coords, kMaxDimension + 1> seq;
    while (true)
    {
        for (int i = 0; i < d; ++i)
            seq[i] = points[subset[i]];
        int common = 0;
        bool facet = true;
        for (std::size_t q = 0; q < n && facet; ++q)
        {
            if (std::binary_search(subset.begin(), subset.end(), q))
                continue;
            seq[d] = points[q];
            int const o = orientation(std::span<Coords const>(seq.data(), d + 1));
            if (o == 0)
                throw GeneralPositionError(
                    "point " + std::to_string(q) + " lies on the span of a "
                    "d-subset", as_indices(subset, q));
            if (common == 0)
                common = o;
            else if (o != common)
                facet = false;
        }
        if (facet)
        {
            facet_vertices.insert(facet_vertices.end(), subset.begin(),
                                  subset.end());
            auto const cof = detail::last_row_cofactors(
                d, seq[0], std::span<Coords const>(seq.data() + 1, d - 1));
            // Other points share orientation `common`, i.e. lie beneath
            double const flip = -detail::orientation_parity(d) * common;
            std::array<double, kMaxDimension> outward;
            for (int j = 0; j < d; ++j)
                outward[j] = flip * cof.cofactor[j];
            normals.resize(normals.size() + d);
            offsets.push_back(0);
            write_plane(d, outward.data(), seq[0],
                        &normals[normals.size() - d], &offsets.back());
        }

        // Next d-subset in lexicographic order
        int i = d - 1;
        while (i >= 0 && subset[i] == n - d + i)
            --i;
        if (i < 0)
            break;
        ++subset[i];
        for (int k = i + 1; k < d; ++k)
            subset[k] = subset[k - 1] + 1;
    }
    auto nbrs = pair_ridges(d, facet_vertices);
    return HullComplex(points, std::move(facet_vertices), std::move(nbrs),
                       std::move(normals), std::move(offsets));
}

}  // namespace rbp

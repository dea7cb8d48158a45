#include <random>

#include <doctest.h>

#include "rbp/combinatorics.hpp"
#include "rbp/error.hpp"
#include "rbp/faces.hpp"
#include "rbp/hull.hpp"

using namespace rbp;

namespace
{

//! {0, e_1, ..., e_d} followed by x
PointSet simplex_and(std::vector<double> const& x)
{
    int const d = static_cast<int>(x.size());
    PointSet s(d);
    std::vector<double> p(d, 0.0);
    s.push_back(p);
    for (int i = 0; i < d; ++i)
    {
        std::fill(p.begin(), p.end(), 0.0);
        p[i] = 1;
        s.push_back(p);
    }
    s.push_back(x);
    return s;
}

std::vector<Coords> first(PointSet const& s, std::size_t m)
{
    std::vector<Coords> out;
    for (std::size_t i = 0; i < m; ++i)
        out.push_back(s[i]);
    return out;
}

//! Independent evaluation of the face-count formula with the a < b
//! convention spelled out
std::int64_t choose(int a, int b)
{
    if (b < 0 || a < b)
        return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= b; ++i)
        r = r * (a - b + i) / i;
    return r;
}

}  // namespace

TEST_CASE("face counts of the types")
{
    CHECK(type_f_count(4, 1, 1) == 14);
    CHECK(type_f_count(4, 1, 2) == 16);
    CHECK(type_f_count(4, 1, 3) == 8);
    CHECK(type_f_count(4, 2, 1) == 15);
    CHECK(type_f_count(4, 2, 2) == 18);
    CHECK(type_f_count(4, 2, 3) == 9);
    CHECK(type_f_count(3, 1, 1) == 9);
    CHECK(type_f_count(3, 1, 2) == 6);

    for (int d = 2; d <= 12; ++d)
        for (int j = 1; j <= d / 2; ++j)
            for (int k = 1; k <= d - 1; ++k)
            {
                auto const expected = choose(d + 2, d - k + 1) - choose(j + 1, d - k + 1)
                                      - choose(d - j + 1, d - k + 1);
                CHECK(type_f_count(d, j, k) == expected);
                CHECK(type_f_count(d, j, k) >= 0);
            }

    CHECK_THROWS_AS(type_f_count(4, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(type_f_count(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(type_f_count(4, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(type_f_count(4, 1, 4), std::invalid_argument);
}

TEST_CASE("type 1 has strictly fewer faces than type 2")
{
    for (int d = 4; d <= 12; ++d)
        for (int k = 1; k <= d - 1; ++k)
            CHECK(type_f_count(d, 1, k) < type_f_count(d, 2, k));
}

TEST_CASE("labels fold")
{
    CHECK(TypeLabel::folded(4, 3) == TypeLabel{4, 1});
    CHECK(TypeLabel::folded(5, 2) == TypeLabel{5, 2});
    CHECK(TypeLabel::folded(5, 3) == TypeLabel{5, 2});
    CHECK(TypeLabel::folded(6, 3) == TypeLabel{6, 3});
    CHECK(TypeLabel::folded(4, 1).name() == "T_1^4");
    CHECK_THROWS_AS(TypeLabel::folded(4, 4), std::invalid_argument);
    CHECK_THROWS_AS(TypeLabel::folded(4, 0), std::invalid_argument);
}

TEST_CASE("beyond counts on the standard simplex")
{
    auto const centroid = simplex_and({0.2, 0.2, 0.2, 0.2});
    auto const s = first(centroid, 5);
    CHECK(beyond_count(centroid[5], s) == 0);
    CHECK(beyond_count(std::vector<double>{2, 0.1, 0.1, 0.1}, s) == 1);
    CHECK(beyond_count(std::vector<double>{-1, -1, 0.1, 0.1}, s) == 2);
    CHECK(beyond_count(std::vector<double>{-1, -1, -1, 0.1}, s) == 3);
    CHECK(beyond_count(std::vector<double>{-1, -1, -1, -1}, s) == 4);
    // On a span is not beyond
    CHECK(beyond_count(std::vector<double>{0, 0.1, 0.1, 0.1}, s) == 0);

    std::vector<std::vector<double>> flat{{0, 0}, {1, 0}, {2, 0}};
    std::vector<Coords> bad(flat.begin(), flat.end());
    CHECK_THROWS_AS(beyond_count(std::vector<double>{0, 1}, bad), GeneralPositionError);
}

TEST_CASE("regions")
{
    auto const base = simplex_and({0.2, 0.2, 0.2, 0.2});
    auto const s = first(base, 5);
    auto const inside = region_of(std::vector<double>{0.1, 0.1, 0.1, 0.1}, s);
    CHECK_FALSE(inside.region);
    CHECK_FALSE(inside.boundary);
    CHECK(inside.beyond == 0);

    auto const one = region_of(std::vector<double>{2, 0.1, 0.1, 0.1}, s);
    REQUIRE(one.region);
    CHECK(*one.region == 1);

    auto const on = region_of(std::vector<double>{0, 0.1, 2, 0.1}, s);
    CHECK(on.boundary);
    CHECK_FALSE(on.region);
}

TEST_CASE("regions partition the complement of a random simplex")
{
    std::mt19937_64 g(31);
    std::normal_distribution<double> z;
    for (int d = 2; d <= 7; ++d)
    {
        std::vector<std::vector<double>> simplex(d + 1, std::vector<double>(d));
        for (auto& p : simplex)
            for (auto& c : p)
                c = z(g);
        std::vector<Coords> s(simplex.begin(), simplex.end());
        int outside = 0;
        std::vector<int> seen(d + 1, 0);
        for (int trial = 0; outside < 10000 / 6 + 1 && trial < 100000; ++trial)
        {
            std::vector<double> x(d);
            for (auto& c : x)
                c = 3 * z(g);
            auto const r = region_of(x, s);
            REQUIRE_FALSE(r.boundary);
            if (r.beyond == 0)
            {
                CHECK_FALSE(r.region);
                continue;
            }
            ++outside;
            // Behind a vertex of S: no region, and S + x loses that vertex
            PointSet all(d);
            for (auto const& q : simplex)
                all.push_back(q);
            all.push_back(x);
            bool const full = incremental_hull(all).hull_vertices().size()
                              == static_cast<std::size_t>(d + 2);
            if (r.beyond == d)
            {
                CHECK_FALSE(r.region);
                CHECK_FALSE(full);
                ++seen[d];
                continue;
            }
            CHECK(full);
            REQUIRE(r.region);
            CHECK(*r.region == r.beyond);
            CHECK(*r.region >= 1);
            CHECK(*r.region <= d - 1);
            ++seen[*r.region];
        }
        CHECK(outside > 10000 / 6);
        CHECK(seen[1] > 0);
        CHECK(seen[d] > 0);
    }
}

TEST_CASE("classification examples")
{
    auto const t1 = simplex_and({2, 0.1, 0.1, 0.1});
    CHECK(classify_d_plus_2(t1) == TypeLabel{4, 1});
    CHECK(f_vector(brute_force_hull(t1)).counts == std::vector<std::int64_t>{6, 14, 16, 8});

    auto const t2 = simplex_and({-1, -1, 0.1, 0.1});
    CHECK(classify_d_plus_2(t2) == TypeLabel{4, 2});
    CHECK(f_vector(brute_force_hull(t2)).counts == std::vector<std::int64_t>{6, 15, 18, 9});

    auto const folded = simplex_and({-1, -1, -1, 0.1});
    CHECK(classify_d_plus_2(folded) == TypeLabel{4, 1});
    CHECK(f_vector(brute_force_hull(folded)).counts
          == std::vector<std::int64_t>{6, 14, 16, 8});
}

TEST_CASE("classification errors")
{
    // Apex inside S: only d+1 hull vertices
    CHECK_THROWS_AS(classify_d_plus_2(simplex_and({0.1, 0.1, 0.1, 0.1})),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_with_apex(simplex_and({0.1, 0.1, 0.1, 0.1}), 5),
                    std::invalid_argument);
    // bey = d swallows a vertex of S
    auto const swallowed = simplex_and({-1, -1, -1, -1});
    CHECK_THROWS_AS(classify_d_plus_2(swallowed), std::invalid_argument);
    CHECK_THROWS_AS(classify_with_apex(swallowed, 5), std::invalid_argument);
    // Apex on a facet span
    CHECK_THROWS_AS(classify_with_apex(simplex_and({0, 0.1, 2, 0.1}), 5),
                    GeneralPositionError);
    // Wrong point count
    PointSet five(4);
    for (int i = 0; i < 5; ++i)
        five.push_back(simplex_and({2, 0.1, 0.1, 0.1})[i]);
    CHECK_THROWS_AS(classify_d_plus_2(five), std::invalid_argument);
}

TEST_CASE("classification agrees with hull face counts and every apex choice")
{
    std::mt19937_64 g(32);
    std::normal_distribution<double> z;
    for (int d = 4; d <= 7; ++d)
    {
        int classified = 0;
        std::vector<int> types(d / 2 + 1, 0);
        while (classified < 60)
        {
            PointSet pts(d);
            std::vector<double> p(d);
            for (int i = 0; i < d + 2; ++i)
            {
                for (auto& c : p)
                    c = z(g);
                pts.push_back(p);
            }
            auto const hull = incremental_hull(pts);
            if (hull.hull_vertices().size() != static_cast<std::size_t>(d + 2))
                continue;
            ++classified;
            auto const label = classify_d_plus_2(pts);
            ++types[label.j];
            auto const f = f_vector(hull);
            CHECK(f[0] == d + 2);
            for (int k = 1; k <= d - 1; ++k)
                CHECK(f[k] == type_f_count(d, label.j, k));
            for (int apex = 0; apex < d + 2; ++apex)
                CHECK(classify_with_apex(pts, apex) == label);
        }
        // Both the smallest and the largest type occur
        CHECK(types[1] > 0);
        CHECK(types[d / 2] > 0);
    }
}

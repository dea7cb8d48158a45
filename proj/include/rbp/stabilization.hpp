#pragma once

#include <cstdint>
#include <vector>

#include "rbp/body.hpp"
#include "rbp/hull.hpp"

namespace rbp
{

//---------------------------------------------------------------------------//
/*!
 * Score xi_k of every input point: the number of k-faces containing it,
 * divided by k+1.
 *
 * Values are kept as integer numerators over the common divisor k+1, so
 * sums are exact.
 */
struct ScoreTable
{
    int k{0};
    //! counts[i] = number of k-faces containing point i (0 off the hull)
    std::vector<std::int64_t> counts;

    std::int64_t divisor() const noexcept { return k + 1; }
    //! Sum of numerators; equals (k+1) f_k
    std::int64_t numerator_sum() const noexcept;
    //! Exact check of sum_i xi_k(i) == f
    bool sums_to(std::int64_t f) const noexcept;
};

//! Per-vertex star counting; independent of enumerate_k_faces
ScoreTable scores(HullComplex const& hull, int k);

//! Number of k-faces of the hull containing vertex v
std::int64_t vertex_face_count(HullComplex const& hull, VertexIndex v, int k);

//---------------------------------------------------------------------------//

struct StabilizationRecord
{
    VertexIndex point{0};
    double radius{0};
    //! Facet attaining the maximum
    std::vector<VertexIndex> facet;
};

/*!
 * Smallest R such that K intersected with the outer halfspace of every
 * facet containing x lies in the ball B(x, R).
 *
 * Balls use a closed form. Ellipsoids use multi-start projected ascent on
 * the boundary with absolute tolerance 1e-6.
 */
StabilizationRecord stabilization_radius(ConvexBodyModel const& body,
                                         VertexIndex x,
                                         HullComplex const& hull);

//! max{|z - x| : z in K, <z, u> >= t} for a unit normal u
double farthest_in_cap(ConvexBodyModel const& body,
                       Coords x,
                       Coords normal,
                       double offset);

//---------------------------------------------------------------------------//

struct TailRow
{
    double r{0};
    std::int64_t n{0};
    double survival{0};
    double std_error{0};
};

struct TailResult
{
    std::vector<TailRow> rows;
    //! Radius observed in each replication, in replication order
    std::vector<double> radii;
    //! Least squares of log P(R >= r) on r^{d-1} n within the P window
    double slope{0};
    double intercept{0};
    double r_squared{0};
    std::size_t points_in_window{0};
};

struct TailConfig
{
    std::int64_t n{0};
    std::vector<double> r_grid;
    std::size_t replications{0};
    std::uint64_t seed{0};
    int threads{1};
};

/*!
 * Empirical survival of R at one uniformly chosen hull vertex per
 * replication, with a log-linear fit over grid points whose survival lies
 * in [10/M, 0.5]. Throws InsufficientDataError when fewer than two grid
 * points fall in that window.
 */
TailResult radius_tail_experiment(ConvexBodyModel const& body, TailConfig const& cfg);

struct MomentRow
{
    std::int64_t n{0};
    int q{0};
    double moment{0};
    double std_error{0};
};

struct MomentResult
{
    std::vector<MomentRow> rows;
    //! Some q has moment at the largest n above twice that at the smallest n
    bool unbounded_flag{false};
};

struct MomentConfig
{
    int k{0};
    std::vector<int> q_list;
    std::vector<std::int64_t> n_grid;
    std::size_t replications{0};
    std::uint64_t seed{0};
    int threads{1};
};

//! Empirical E[xi_k(X_1, X_n)^q]; q in {1, 2, 4} and at least 500 replications
MomentResult moment_experiment(ConvexBodyModel const& body, MomentConfig const& cfg);

}  // namespace rbp

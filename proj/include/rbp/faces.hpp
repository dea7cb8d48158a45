#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rbp/hull.hpp"

namespace rbp
{

//! Face counts (f_0, ..., f_{d-1}) of a d-polytope.
struct FVector
{
    std::vector<std::int64_t> counts;

    int dimension() const noexcept { return static_cast<int>(counts.size()); }
    std::int64_t operator[](int k) const { return counts.at(k); }
    bool operator==(FVector const&) const = default;
};

//---------------------------------------------------------------------------//
/*!
 * Sorted, deduplicated list of k-faces of a simplicial hull, each given as
 * a strictly increasing (k+1)-tuple of vertex indices.
 */
class FaceList
{
  public:
    FaceList(int width, std::vector<VertexIndex> flat)
        : width_(width), flat_(std::move(flat))
    {
    }

    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return flat_.size() / width_; }
    std::span<VertexIndex const> operator[](std::size_t i) const noexcept
    {
        return {flat_.data() + i * width_, static_cast<std::size_t>(width_)};
    }
    bool contains(std::span<VertexIndex const> face) const;

  private:
    int width_;
    std::vector<VertexIndex> flat_;
};

FaceList enumerate_k_faces(HullComplex const& hull, int k);

//! f_k from enumerate_k_faces for k < d-1; f_{d-1} is the facet count.
FVector f_vector(HullComplex const& hull);

//! Alternating sum equals 1 - (-1)^d.
bool euler_check(FVector const& f, int d);

//! sum_{i=k}^{d-1} (-1)^i C(i+1,k+1) f_i == (-1)^(d-1) f_k for every k.
bool dehn_sommerville_check(FVector const& f, int d);

//! Exact binomial coefficient; zero when k < 0 or k > n.
std::int64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace rbp

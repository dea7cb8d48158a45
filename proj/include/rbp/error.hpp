#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbp
{

//! Input violates the general-position assumption (exact degeneracy).
class GeneralPositionError : public std::runtime_error
{
  public:
    GeneralPositionError(std::string const& what,
                         std::vector<std::size_t> indices = {})
        : std::runtime_error(what), indices_(std::move(indices))
    {
    }

    //! Indices of the points involved in the degeneracy, when known.
    std::vector<std::size_t> const& indices() const noexcept
    {
        return indices_;
    }

  private:
    std::vector<std::size_t> indices_;
};

//! A requested size cannot be accommodated (e.g. cap packing too dense).
class CapacityError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Not enough usable data to produce an estimate.
class InsufficientDataError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Configuration document or flags cannot be interpreted.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace rbp

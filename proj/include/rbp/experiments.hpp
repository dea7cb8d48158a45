#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rbp/body.hpp"

namespace rbp
{

//! Body description as it appears in configuration files.
struct BodySpec
{
    BodyKind kind{BodyKind::ball};
    double radius{1};
    std::vector<double> center;
    std::vector<double> semi_axes;

    //! Throws ConfigError if the description does not fit dimension d
    ConvexBodyModel make(int d) const;
};

enum class Model
{
    binomial,
    poisson,
};

char const* to_string(Model m) noexcept;

struct ExperimentConfig
{
    BodySpec body;
    int d{4};
    std::vector<int> k_list{3};
    Model model{Model::binomial};
    std::vector<std::int64_t> n_grid;
    std::vector<double> t_grid;
    std::size_t replications{100};
    std::uint64_t master_seed{0x5eed5eed5eed5eedull};
    //! Affects speed only
    int threads{1};

    //! Throws ConfigError on an invalid combination
    void validate() const;
    //! Grid values of the active model as doubles
    std::vector<double> cells() const;
};

struct ReplicationRecord
{
    std::size_t rep{0};
    std::uint64_t seed{0};
    //! n, or the drawn N for the Poisson model
    std::int64_t n{0};
    bool degenerate{false};
    //! f_0..f_{d-1}; all zero for degenerate replications
    std::vector<std::int64_t> f;
};

struct ReplicationCell
{
    Model model{Model::binomial};
    //! n or t
    double parameter{0};
    std::vector<ReplicationRecord> records;
};

struct ReplicationTable
{
    ExperimentConfig config;
    std::vector<ReplicationCell> cells;
    //! Replications whose score identity was re-verified
    std::size_t audited{0};
};

/*!
 * Replication i of grid cell c uses the stream seeded with
 * derive_seed(master_seed, c, i); results do not depend on the thread count.
 * A replication whose input is degenerate is flagged and the run continues.
 * About 1% of replications (selected from their own seeds) recompute the
 * scores and verify sum_i xi_k = f_k exactly; a mismatch is an internal
 * error (std::logic_error).
 */
ReplicationTable run_binomial(ExperimentConfig const& config);
ReplicationTable run_poisson(ExperimentConfig const& config);
ReplicationTable run_experiment(ExperimentConfig const& config);

//! Whether replication with this seed takes part in the score audit
bool selected_for_audit(std::uint64_t seed) noexcept;

struct SummaryStats
{
    int k{0};
    double cell{0};
    double mean{0};
    double variance{0};
    double var_ci_lo{0};
    double var_ci_hi{0};
    double ks{0};
    std::size_t m_effective{0};
    std::size_t degenerate_count{0};
};

/*!
 * Mean, unbiased variance, Kolmogorov distance of the self-normalized f_k
 * sample to the standard normal, and a 1000-resample percentile bootstrap
 * interval for the variance drawn from a stream seeded with bootstrap_seed.
 * Throws InsufficientDataError with fewer than two usable replications.
 */
SummaryStats
summarize(ReplicationCell const& cell, int k, std::uint64_t bootstrap_seed);

//! Bootstrap seed used for cell c and face dimension k
std::uint64_t bootstrap_seed(std::uint64_t master, std::size_t cell, int k) noexcept;

//! Summaries of every cell for face dimension k, in grid order
std::vector<SummaryStats> summarize(ReplicationTable const& table, int k);

struct CltReport
{
    std::vector<double> cells;
    std::vector<double> ks;
    //! ks * sqrt(cell)
    std::vector<double> normalized;
    double ratio{0};
    //! ratio > 3
    bool flagged{false};
};

//! Throws InsufficientDataError for fewer than two cells or a zero variance
CltReport clt_report(std::vector<SummaryStats> const& summaries);
CltReport clt_report(ReplicationTable const& table, int k);

//---------------------------------------------------------------------------//
// Persistence

//! rep,seed,n,degenerate,f0,...,f{d-1}
void write_replication_csv(std::ostream& os, ReplicationCell const& cell, int d);
//! Inverse of write_replication_csv; throws std::runtime_error when malformed
ReplicationCell read_replication_csv(std::istream& is, Model model, double parameter);

//! File name for one cell, e.g. replications_binomial_250.csv
std::string replication_file_name(Model model, double parameter);

//! Decimal rendering of a grid value (integers without a fraction)
std::string format_cell(double parameter);

std::string format_seed(std::uint64_t seed);
//! Accepts hexadecimal with or without 0x; throws std::invalid_argument
std::uint64_t parse_seed(std::string const& text);

}  // namespace rbp

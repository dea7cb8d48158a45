#include "rbp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "detail/parallel.hpp"
#include "rbp/error.hpp"
#include "rbp/faces.hpp"
#include "rbp/hull.hpp"
#include "rbp/stabilization.hpp"
#include "rbp/statistics.hpp"

namespace rbp
{
namespace
{

constexpr std::size_t kBootstrapResamples = 1000;
constexpr std::uint64_t kAuditStream = 0xa0d17;
// Bootstrap streams live far above any replication counter
constexpr std::uint64_t kBootstrapCounter = 1ull << 63;

void audit_scores(HullComplex const& hull,
                  std::vector<std::int64_t> const& f,
                  std::vector<int> const& k_list)
{
    for (int k : k_list)
    {
        if (!scores(hull, k).sums_to(f[k]))
        {
            throw std::logic_error("score audit failed: sum of xi_"
                                   + std::to_string(k) + " differs from f_"
                                   + std::to_string(k));
        }
    }
}

ReplicationTable run(ExperimentConfig const& config, Model model)
{
    ExperimentConfig cfg = config;
    cfg.model = model;
    cfg.validate();
    auto const body = cfg.body.make(cfg.d);
    auto const grid = cfg.cells();

    ReplicationTable table;
    table.config = cfg;
    table.cells.resize(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c)
    {
        table.cells[c].model = model;
        table.cells[c].parameter = grid[c];
        table.cells[c].records.resize(cfg.replications);
    }

    std::atomic<std::size_t> audited{0};
    std::size_t const total = grid.size() * cfg.replications;
    detail::parallel_for(total, cfg.threads, [&](std::size_t job) {
        std::size_t const c = job / cfg.replications;
        std::size_t const i = job % cfg.replications;
        ReplicationRecord& rec = table.cells[c].records[i];
        rec.rep = i;
        rec.seed = derive_seed(cfg.master_seed, c, i);
        rec.f.assign(cfg.d, 0);
        RandomStream rng(rec.seed);
        rec.n = model == Model::binomial ? static_cast<std::int64_t>(grid[c])
                                         : rng.poisson(grid[c]);
        if (rec.n <= cfg.d + 1)
        {
            rec.degenerate = true;
            return;
        }
        try
        {
            auto const pts = body.sample_surface(rng, static_cast<std::size_t>(rec.n));
            auto const hull = incremental_hull(pts);
            rec.f = f_vector(hull).counts;
            if (selected_for_audit(rec.seed))
            {
                audit_scores(hull, rec.f, cfg.k_list);
                ++audited;
            }
        }
        catch (GeneralPositionError const&)
        {
            rec.degenerate = true;
            rec.f.assign(cfg.d, 0);
        }
    });
    table.audited = audited.load();
    return table;
}

}  // namespace

//---------------------------------------------------------------------------//

ConvexBodyModel BodySpec::make(int d) const
{
    try
    {
        if (kind == BodyKind::ball)
            return ConvexBodyModel::ball(d, radius, center);
        if (static_cast<int>(semi_axes.size()) != d)
        {
            throw ConfigError("body.semi_axes has " + std::to_string(semi_axes.size())
                              + " entries but d = " + std::to_string(d));
        }
        return ConvexBodyModel::ellipsoid(semi_axes);
    }
    catch (std::invalid_argument const& e)
    {
        throw ConfigError(e.what());
    }
}

char const* to_string(Model m) noexcept
{
    return m == Model::binomial ? "binomial" : "poisson";
}

void ExperimentConfig::validate() const
{
    if (d < 2 || d > kMaxDimension)
        throw ConfigError("d must be in [2, " + std::to_string(kMaxDimension) + "]");
    if (k_list.empty())
        throw ConfigError("k list is empty");
    for (int k : k_list)
    {
        if (k < 0 || k > d - 1)
            throw ConfigError("k = " + std::to_string(k) + " is outside [0, d-1]");
    }
    if (replications < 2)
        throw ConfigError("need at least two replications");
    if (threads < 1)
        throw ConfigError("threads must be positive");
    if (model == Model::binomial)
    {
        if (n_grid.empty())
            throw ConfigError("binomial model needs a nonempty n grid");
        for (auto n : n_grid)
        {
            if (n < d + 2)
                throw ConfigError("n = " + std::to_string(n) + " is below d+2");
        }
    }
    else
    {
        if (t_grid.empty())
            throw ConfigError("poisson model needs a nonempty t grid");
        for (double t : t_grid)
        {
            if (!(t > 1) || !std::isfinite(t))
                throw ConfigError("t values must be finite and > 1");
        }
    }
    body.make(d);
}

std::vector<double> ExperimentConfig::cells() const
{
    if (model == Model::poisson)
        return t_grid;
    return {n_grid.begin(), n_grid.end()};
}

ReplicationTable run_binomial(ExperimentConfig const& config)
{
    return run(config, Model::binomial);
}

ReplicationTable run_poisson(ExperimentConfig const& config)
{
    return run(config, Model::poisson);
}

ReplicationTable run_experiment(ExperimentConfig const& config)
{
    return run(config, config.model);
}

bool selected_for_audit(std::uint64_t seed) noexcept
{
    return split_seed(seed, kAuditStream) % 100 == 0;
}

std::uint64_t bootstrap_seed(std::uint64_t master, std::size_t cell, int k) noexcept
{
    return derive_seed(master, cell, kBootstrapCounter | static_cast<std::uint64_t>(k));
}

SummaryStats
summarize(ReplicationCell const& cell, int k, std::uint64_t seed)
{
    SummaryStats s;
    s.k = k;
    s.cell = cell.parameter;
    std::vector<double> values;
    for (auto const& rec : cell.records)
    {
        if (rec.degenerate)
        {
            ++s.degenerate_count;
            continue;
        }
        if (k < 0 || k >= static_cast<int>(rec.f.size()))
            throw std::out_of_range("summarize: k outside the f-vector");
        values.push_back(static_cast<double>(rec.f[k]));
    }
    s.m_effective = values.size();
    if (values.size() < 2)
    {
        throw InsufficientDataError("summarize: cell " + format_cell(cell.parameter)
                                    + " has fewer than two usable replications");
    }
    s.mean = mean(values);
    s.variance = sample_variance(values);
    s.ks = ks_to_normal(self_normalize(values));

    RandomStream rng(seed);
    std::vector<double> boot(kBootstrapResamples);
    std::vector<double> resample(values.size());
    for (auto& b : boot)
    {
        for (auto& r : resample)
            r = values[rng.uniform_index(values.size())];
        b = sample_variance(resample);
    }
    std::sort(boot.begin(), boot.end());
    s.var_ci_lo = quantile_sorted(boot, 0.025);
    s.var_ci_hi = quantile_sorted(boot, 0.975);
    return s;
}

std::vector<SummaryStats> summarize(ReplicationTable const& table, int k)
{
    std::vector<SummaryStats> out;
    for (std::size_t c = 0; c < table.cells.size(); ++c)
    {
        out.push_back(summarize(table.cells[c], k,
                                bootstrap_seed(table.config.master_seed, c, k)));
    }
    return out;
}

CltReport clt_report(std::vector<SummaryStats> const& summaries)
{
    if (summaries.size() < 2)
        throw InsufficientDataError("clt_report: need at least two cells");
    CltReport r;
    for (auto const& s : summaries)
    {
        if (!(s.variance > 0))
        {
            throw InsufficientDataError("clt_report: variance is zero at cell "
                                        + format_cell(s.cell)
                                        + "; standardization is undefined");
        }
        r.cells.push_back(s.cell);
        r.ks.push_back(s.ks);
        r.normalized.push_back(s.ks * std::sqrt(s.cell));
    }
    auto const [lo, hi] = std::minmax_element(r.normalized.begin(), r.normalized.end());
    r.ratio = *lo > 0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    r.flagged = r.ratio > 3;
    return r;
}

CltReport clt_report(ReplicationTable const& table, int k)
{
    return clt_report(summarize(table, k));
}

//---------------------------------------------------------------------------//

std::string format_seed(std::uint64_t seed)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(seed));
    return buf;
}

std::uint64_t parse_seed(std::string const& text)
{
    std::string_view s = text;
    if (s.starts_with("0x") || s.starts_with("0X"))
        s.remove_prefix(2);
    std::uint64_t v = 0;
    auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("seed '" + text + "' is not a 64-bit hexadecimal value");
    return v;
}

std::string format_cell(double parameter)
{
    if (parameter == std::floor(parameter) && std::fabs(parameter) < 1e15)
        return std::to_string(static_cast<long long>(parameter));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", parameter);
    return buf;
}

std::string replication_file_name(Model model, double parameter)
{
    return std::string("replications_") + to_string(model) + "_"
           + format_cell(parameter) + ".csv";
}

void write_replication_csv(std::ostream& os, ReplicationCell const& cell, int d)
{
    os << "rep,seed,n,degenerate";
    for (int k = 0; k < d; ++k)
        os << ",f" << k;
    os << '\n';
    for (auto const& rec : cell.records)
    {
        os << rec.rep << ',' << format_seed(rec.seed) << ',' << rec.n << ','
           << (rec.degenerate ? 1 : 0);
        for (int k = 0; k < d; ++k)
            os << ',' << (k < static_cast<int>(rec.f.size()) ? rec.f[k] : 0);
        os << '\n';
    }
}

ReplicationCell read_replication_csv(std::istream& is, Model model, double parameter)
{
    ReplicationCell cell;
    cell.model = model;
    cell.parameter = parameter;
    std::string line;
    if (!std::getline(is, line) || !line.starts_with("rep,seed,n,degenerate"))
        throw std::runtime_error("replication CSV: missing header");
    std::size_t const columns = std::count(line.begin(), line.end(), ',') + 1;
    if (columns < 5)
        throw std::runtime_error("replication CSV: no f-vector columns");
    std::size_t lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != columns)
        {
            throw std::runtime_error("replication CSV line " + std::to_string(lineno)
                                     + ": expected " + std::to_string(columns)
                                     + " fields");
        }
        try
        {
            ReplicationRecord rec;
            rec.rep = std::stoull(fields[0]);
            rec.seed = parse_seed(fields[1]);
            rec.n = std::stoll(fields[2]);
            rec.degenerate = fields[3] == "1";
            for (std::size_t c = 4; c < fields.size(); ++c)
                rec.f.push_back(std::stoll(fields[c]));
            cell.records.push_back(std::move(rec));
        }
        catch (std::exception const&)
        {
            throw std::runtime_error("replication CSV line " + std::to_string(lineno)
                                     + ": malformed value");
        }
    }
    return cell;
}

}  // namespace rbp

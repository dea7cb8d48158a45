#include <cmath>
#include <sstream>

#include <doctest.h>

#include "rbp/error.hpp"
#include "rbp/experiments.hpp"
#include "rbp/statistics.hpp"

using namespace rbp;

namespace
{

std::string csv_of(ReplicationTable const& t)
{
    std::ostringstream os;
    for (auto const& cell : t.cells)
        write_replication_csv(os, cell, t.config.d);
    return os.str();
}

ReplicationCell synthetic_cell(std::vector<std::int64_t> const& values)
{
    ReplicationCell cell;
    cell.parameter = 100;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        ReplicationRecord r;
        r.rep = i;
        r.n = 100;
        r.f = {100, values[i]};
        cell.records.push_back(r);
    }
    return cell;
}

}  // namespace

TEST_CASE("d=3 f-vectors are deterministic")
{
    for (auto kind : {BodyKind::ball, BodyKind::ellipsoid})
    {
        ExperimentConfig cfg;
        cfg.d = 3;
        cfg.k_list = {0, 1, 2};
        cfg.body.kind = kind;
        cfg.body.semi_axes = {2, 1, 1};
        cfg.n_grid = {5, 10, 60};
        cfg.replications = 30;
        auto const t = run_binomial(cfg);
        REQUIRE(t.cells.size() == 3u);
        for (auto const& cell : t.cells)
        {
            auto const n = static_cast<std::int64_t>(cell.parameter);
            for (auto const& rec : cell.records)
            {
                CHECK_FALSE(rec.degenerate);
                CHECK(rec.n == n);
                CHECK(rec.f == std::vector<std::int64_t>{n, 3 * n - 6, 2 * n - 4});
            }
        }
        // Zero variance: standardization is undefined
        CHECK_THROWS_AS(clt_report(t, 2), InsufficientDataError);
        auto const s = summarize(t, 1);
        CHECK(s[0].variance == 0);
        CHECK(s[0].ks == doctest::Approx(0.5));
    }
}

TEST_CASE("replication tables do not depend on the thread count")
{
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.k_list = {3};
    cfg.n_grid = {30, 80};
    cfg.replications = 40;
    cfg.master_seed = 0x1234;
    cfg.threads = 1;
    auto const one = run_binomial(cfg);
    cfg.threads = 4;
    auto const four = run_binomial(cfg);
    CHECK(csv_of(one) == csv_of(four));
    CHECK(one.audited == four.audited);

    for (std::size_t c = 0; c < one.cells.size(); ++c)
        for (std::size_t i = 0; i < one.cells[c].records.size(); ++i)
        {
            auto const& rec = one.cells[c].records[i];
            CHECK(rec.seed == derive_seed(cfg.master_seed, c, i));
            CHECK(rec.f[0] == rec.n);
        }

    cfg.master_seed = 0x1235;
    CHECK(csv_of(run_binomial(cfg)) != csv_of(one));
}

TEST_CASE("summaries")
{
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.n_grid = {40, 80, 160};
    cfg.replications = 200;
    auto const t = run_binomial(cfg);
    auto const s = summarize(t, 3);
    REQUIRE(s.size() == 3u);
    for (std::size_t c = 0; c < s.size(); ++c)
    {
        std::vector<double> values;
        for (auto const& r : t.cells[c].records)
            values.push_back(static_cast<double>(r.f[3]));
        CHECK(s[c].mean == doctest::Approx(mean(values)));
        CHECK(s[c].variance == doctest::Approx(sample_variance(values)));
        CHECK(s[c].var_ci_lo <= s[c].variance);
        CHECK(s[c].var_ci_hi >= s[c].variance);
        CHECK(s[c].var_ci_lo > 0);
        CHECK(s[c].ks >= 0);
        CHECK(s[c].ks <= 1);
        CHECK(s[c].m_effective == 200u);
        CHECK(s[c].degenerate_count == 0u);
        // Efron-Stein side: variance stays of order n
        CHECK(s[c].variance / s[c].cell < 10);
    }
    // Bootstrap is reproducible
    auto const again = summarize(t, 3);
    CHECK(again[1].var_ci_lo == s[1].var_ci_lo);

    auto const report = clt_report(s);
    REQUIRE(report.normalized.size() == 3u);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(report.normalized[i] == doctest::Approx(s[i].ks * std::sqrt(s[i].cell)));
    CHECK(report.flagged == (report.ratio > 3));

    CHECK_THROWS_AS(summarize(t.cells[0], 4, 1), std::out_of_range);
    CHECK_THROWS_AS(clt_report(std::vector<SummaryStats>{s[0]}), InsufficientDataError);
}

TEST_CASE("summary of synthetic cells")
{
    auto const constant = summarize(synthetic_cell(std::vector<std::int64_t>(20, 7)), 1, 3);
    CHECK(constant.variance == 0);
    CHECK(constant.ks == doctest::Approx(0.5));
    CHECK(constant.var_ci_lo == 0);
    CHECK(constant.var_ci_hi == 0);

    auto const pm = summarize(synthetic_cell({-1, 1}), 1, 3);
    CHECK(pm.ks == doctest::Approx(0.3413447460685429));
    CHECK(pm.variance == doctest::Approx(2));

    // Gaussian cells of equal M: the normalized ratio is pure Monte Carlo noise
    RandomStream rng(77);
    std::vector<SummaryStats> cells;
    for (double n : {250.0, 500.0, 1000.0, 2000.0})
    {
        std::vector<std::int64_t> v(2000);
        for (auto& x : v)
            x = std::llround(1e6 + 1e4 * rng.normal());
        auto cell = synthetic_cell(v);
        cell.parameter = n;
        cells.push_back(summarize(cell, 1, 5));
    }
    auto const r = clt_report(cells);
    for (double ks : r.ks)
        CHECK(ks < 1.95 / std::sqrt(2000.0));
    CHECK(r.ratio >= 1);

    auto degenerate = synthetic_cell({1, 2, 3});
    for (auto& rec : degenerate.records)
        rec.degenerate = true;
    CHECK_THROWS_AS(summarize(degenerate, 1, 0), InsufficientDataError);
}

TEST_CASE("poisson model")
{
    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.k_list = {2};
    cfg.t_grid = {100};
    cfg.replications = 10000;
    cfg.threads = 2;
    auto const t = run_poisson(cfg);
    std::vector<double> ns;
    for (auto const& rec : t.cells[0].records)
    {
        ns.push_back(static_cast<double>(rec.n));
        if (!rec.degenerate)
            CHECK(rec.f[2] == 2 * rec.n - 4);
    }
    CHECK(std::fabs(mean(ns) - 100) <= 4 * std::sqrt(100.0 / ns.size()));
    CHECK(sample_variance(ns) == doctest::Approx(100).epsilon(0.06));

    // Small t produces flagged replications that are excluded and counted
    ExperimentConfig small = cfg;
    small.d = 4;
    small.k_list = {3};
    small.t_grid = {4};
    small.replications = 400;
    auto const st = run_poisson(small);
    std::size_t flagged = 0;
    for (auto const& rec : st.cells[0].records)
    {
        if (rec.n <= 5)
            CHECK(rec.degenerate);
        flagged += rec.degenerate;
        if (rec.degenerate)
            CHECK(rec.f == std::vector<std::int64_t>{0, 0, 0, 0});
    }
    CHECK(flagged > 0);
    auto const sum = summarize(st, 3);
    CHECK(sum[0].degenerate_count == flagged);
    CHECK(sum[0].m_effective + flagged == small.replications);
}

TEST_CASE("no degenerate replications at t = 500 in d = 4")
{
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.k_list = {3};
    cfg.model = Model::poisson;
    cfg.t_grid = {500};
    cfg.replications = 10000;
    auto const t = run_experiment(cfg);
    std::size_t flagged = 0;
    for (auto const& rec : t.cells[0].records)
        flagged += rec.degenerate;
    CHECK(flagged == 0u);
    // About 1% of replications are re-audited
    CHECK(t.audited > 50u);
    CHECK(t.audited < 160u);
}

TEST_CASE("audit selection rate")
{
    std::size_t selected = 0;
    for (std::uint64_t i = 0; i < 100000; ++i)
        selected += selected_for_audit(derive_seed(1, 0, i));
    CHECK(selected > 900u);
    CHECK(selected < 1100u);
}

TEST_CASE("configuration validation")
{
    ExperimentConfig cfg;
    cfg.n_grid = {100};
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.d = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.k_list = {4};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.k_list.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.replications = 1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.n_grid = {5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.model = Model::poisson;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.t_grid = {1};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.t_grid = {2};
    CHECK_NOTHROW(bad.validate());
    bad = cfg;
    bad.body.kind = BodyKind::ellipsoid;
    bad.body.semi_axes = {1, 1, 1};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.body.semi_axes = {1, 1, 1, 0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.threads = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    CHECK(cfg.cells() == std::vector<double>{100});
}

TEST_CASE("replication CSV")
{
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.n_grid = {20};
    cfg.replications = 25;
    cfg.master_seed = 0xfeedface;
    auto const t = run_binomial(cfg);
    std::ostringstream os;
    write_replication_csv(os, t.cells[0], 4);
    auto const text = os.str();
    CHECK(text.rfind("rep,seed,n,degenerate,f0,f1,f2,f3\n", 0) == 0);

    std::istringstream is(text);
    auto const back = read_replication_csv(is, Model::binomial, 20);
    REQUIRE(back.records.size() == t.cells[0].records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i)
    {
        auto const& a = back.records[i];
        auto const& b = t.cells[0].records[i];
        CHECK(a.rep == b.rep);
        CHECK(a.seed == b.seed);
        CHECK(a.n == b.n);
        CHECK(a.degenerate == b.degenerate);
        CHECK(a.f == b.f);
    }
    std::ostringstream again;
    write_replication_csv(again, back, 4);
    CHECK(again.str() == text);

    std::istringstream no_header("1,2,3\n");
    CHECK_THROWS_AS(read_replication_csv(no_header, Model::binomial, 1), std::runtime_error);
    std::istringstream short_row("rep,seed,n,degenerate,f0\n0,00,5\n");
    CHECK_THROWS_AS(read_replication_csv(short_row, Model::binomial, 1), std::runtime_error);
    std::istringstream bad_seed("rep,seed,n,degenerate,f0\n0,xyz,5,0,5\n");
    CHECK_THROWS_AS(read_replication_csv(bad_seed, Model::binomial, 1), std::runtime_error);
}

TEST_CASE("names and seeds")
{
    CHECK(format_seed(0x5eed) == "0000000000005eed");
    CHECK(parse_seed("0x5eed") == 0x5eed);
    CHECK(parse_seed("FFFFFFFFFFFFFFFF") == ~0ull);
    CHECK_THROWS_AS(parse_seed(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed("12g"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed("1ffffffffffffffff"), std::invalid_argument);
    CHECK(format_cell(250) == "250");
    CHECK(format_cell(12.5) == "12.5");
    CHECK(replication_file_name(Model::binomial, 250) == "replications_binomial_250.csv");
    CHECK(replication_file_name(Model::poisson, 1000) == "replications_poisson_1000.csv");
    CHECK(bootstrap_seed(1, 2, 3) != bootstrap_seed(1, 2, 4));
    CHECK(std::string(to_string(Model::poisson)) == "poisson");
}

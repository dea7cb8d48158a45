// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "rbp/body.hpp"
#include "rbp/cli.hpp"
#include "rbp/combinatorics.hpp"
#include "rbp/experiments.hpp"
#include "rbp/faces.hpp"
#include "rbp/hull.hpp"
#include "rbp/stabilization.hpp"
#include "rbp/statistics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rbp;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
    bool pass{true};
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, std::string const& what)
    {
        if (ok)
            return;
        failures += (pass ? "" : "; ") + what;
        pass = false;
    }
};

// Counters shared by criteria 1-3
std::size_t g_identity_checked = 0;
std::size_t g_identity_failed = 0;

void check_identities(FVector const& f, int d)
{
    ++g_identity_checked;
    if (!euler_check(f, d) || !dehn_sommerville_check(f, d))
        ++g_identity_failed;
}

PointSet gaussian_points(std::mt19937_64& g, int d, int n)
{
    std::normal_distribution<double> z;
    PointSet pts(d);
    std::vector<double> p(d);
    for (int i = 0; i < n; ++i)
    {
        for (auto& c : p)
            c = z(g);
        pts.push_back(p);
    }
    return pts;
}

int run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "rbp");
    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    return parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, std::cerr);
}

json load_json(fs::path const& p)
{
    std::ifstream is(p);
    return json::parse(is);
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

//---------------------------------------------------------------------------//

void criterion_1(Outcome& o)
{
    auto const t0 = Clock::now();
    std::size_t checked = 0;
    for (auto kind : {BodyKind::ball, BodyKind::ellipsoid})
    {
        ExperimentConfig cfg;
        cfg.d = 3;
        cfg.k_list = {1, 2};
        cfg.body.kind = kind;
        cfg.body.semi_axes = {2, 1, 1};
        cfg.n_grid = {10, 100, 1000};
        cfg.replications = 50;
        for (auto const& cell : run_binomial(cfg).cells)
            for (auto const& rec : cell.records)
            {
                auto const n = rec.n;
                ++checked;
                o.require(!rec.degenerate
                              && rec.f == std::vector<std::int64_t>{n, 3 * n - 6, 2 * n - 4},
                          std::string(to_string(kind)) + " n=" + std::to_string(n));
                check_identities(FVector{rec.f}, 3);
            }
    }
    double const secs = seconds_since(t0);
    o.require(checked == 300, "expected 300 replications");
    o.require(secs < 30, "runtime");
    o.detail << checked << " f-vectors equal (n, 3n-6, 2n-4), " << secs << " s";
}

void criterion_2(Outcome& o)
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(2);
    std::size_t instances = 0, mismatches = 0;
    for (int d = 2; d <= 6; ++d)
        for (int n = d + 1; n <= d + 6; ++n)
            for (int rep = 0; rep < 200; ++rep)
            {
                auto const pts = gaussian_points(g, d, n);
                auto const inc = incremental_hull(pts);
                auto const brute = brute_force_hull(pts);
                ++instances;
                mismatches += inc.facet_sets() != brute.facet_sets();
                check_identities(f_vector(inc), d);
            }
    double const secs = seconds_since(t0);
    o.require(mismatches == 0, std::to_string(mismatches) + " facet-set mismatches");
    o.require(secs < 120, "runtime");
    o.detail << instances << " instances, " << mismatches << " mismatches, " << secs << " s";
}

// Criteria 3 and 5 share the 10^3 random d=4 sphere hulls
void criteria_3_and_5(Outcome& o3, Outcome& o5)
{
    auto const ball = ConvexBodyModel::ball(4);
    std::size_t score_failures = 0;
    double hull_secs = 0, score_secs = 0;
    for (std::uint64_t rep = 0; rep < 1000; ++rep)
    {
        RandomStream rng(derive_seed(0xacce55, 3, rep));
        auto t0 = Clock::now();
        auto const hull = incremental_hull(ball.sample_surface(rng, 100));
        auto const f = f_vector(hull);
        hull_secs += seconds_since(t0);
        check_identities(f, 4);
        t0 = Clock::now();
        for (int k = 0; k < 4; ++k)
            score_failures += !scores(hull, k).sums_to(f[k]);
        score_secs += seconds_since(t0);
    }
    o3.require(g_identity_failed == 0, std::to_string(g_identity_failed) + " identity failures");
    o3.detail << g_identity_checked << " f-vectors, " << g_identity_failed << " failures";
    o5.require(score_failures == 0, std::to_string(score_failures) + " score sums differ");
    o5.require(hull_secs + score_secs < 60, "runtime");
    o5.detail << "4000 (hull, k) pairs, " << score_failures << " failures, "
              << hull_secs + score_secs << " s";
}

void criterion_4(Outcome& o)
{
    auto const t0 = Clock::now();
    std::mt19937_64 g(4);
    std::size_t bad_f = 0, bad_apex = 0, bad_order = 0, total = 0;
    for (int d = 4; d <= 7; ++d)
    {
        for (int k = 1; k < d; ++k)
            bad_order += !(type_f_count(d, 1, k) < type_f_count(d, 2, k));
        int valid = 0;
        while (valid < 100)
        {
            auto const pts = gaussian_points(g, d, d + 2);
            auto const hull = incremental_hull(pts);
            if (hull.hull_vertices().size() != static_cast<std::size_t>(d + 2))
                continue;
            ++valid;
            ++total;
            auto const label = classify_d_plus_2(pts);
            auto const f = f_vector(hull);
            for (int k = 1; k < d; ++k)
                bad_f += f[k] != type_f_count(d, label.j, k);
            for (int apex = 0; apex < d + 2; ++apex)
                bad_apex += !(classify_with_apex(pts, apex) == label);
        }
    }
    double const secs = seconds_since(t0);
    o.require(bad_f == 0, "f-vector differs from the type formula");
    o.require(bad_apex == 0, "label depends on the apex");
    o.require(bad_order == 0, "type ordering");
    o.require(secs < 60, "runtime");
    o.detail << total << " configurations, " << secs << " s";
}

struct GridRun
{
    std::vector<double> n, mean, var, lo, ks;
    double slope{0};
    double ratio{0};
};

GridRun read_grid_run(fs::path const& dir)
{
    GridRun r;
    for (auto const& s : load_json(dir / "summary.json"))
    {
        r.n.push_back(s["cell"].get<double>());
        r.mean.push_back(s["mean"].get<double>());
        r.var.push_back(s["var"].get<double>());
        r.lo.push_back(s["var_ci_lo"].get<double>());
        r.ks.push_back(s["ks"].get<double>());
    }
    auto const a = load_json(dir / "analysis.json").at(0);
    r.slope = a["variance_fit"]["slope"].get<double>();
    r.ratio = a["clt"]["ratio"].get<double>();
    return r;
}

// Criteria 6, 7, 8 and 12 share the d=4 sphere grid run
void criteria_grid(fs::path const& work, Outcome& o6, Outcome& o7, Outcome& o8, Outcome& o12)
{
    std::vector<std::string> const common{"--dim", "4", "--n", "250,500,1000,2000", "--reps",
                                          "2000", "--k", "3", "--seed", "c0ffee"};
    std::vector<std::string> const files{
        replication_file_name(Model::binomial, 250), replication_file_name(Model::binomial, 500),
        replication_file_name(Model::binomial, 1000), replication_file_name(Model::binomial, 2000)};
    int status[2];
    for (int i = 0; i < 2; ++i)
    {
        auto args = common;
        args.insert(args.end(), {"--threads", i == 0 ? "1" : "8", "--out",
                                 (work / (i == 0 ? "threads1" : "threads8")).string(),
                                 "experiment"});
        auto const t0 = Clock::now();
        status[i] = run_cli(args);
        std::cout << "  grid run with " << (i == 0 ? 1 : 8) << " thread(s): "
                  << seconds_since(t0) << " s\n";
    }
    if (status[0] != 0 || status[1] != 0)
    {
        for (auto* o : {&o6, &o7, &o8, &o12})
            o->require(false, "experiment run exited with a nonzero status");
        return;
    }

    // 12: byte-identical replication CSVs
    std::size_t identical = 0;
    for (auto const& f : files)
    {
        auto const a = slurp(work / "threads1" / f);
        identical += !a.empty() && a == slurp(work / "threads8" / f);
    }
    o12.require(identical == files.size(), "replication CSVs differ");
    o12.detail << identical << "/" << files.size() << " CSV files identical";

    auto const r = read_grid_run(work / "threads1");

    // 6: variance of order n
    o6.require(r.slope >= 0.8 && r.slope <= 1.2, "variance slope outside [0.8, 1.2]");
    bool ci_positive = true;
    for (double lo : r.lo)
        ci_positive = ci_positive && lo > 0;
    o6.require(ci_positive, "a bootstrap interval reaches 0");
    o6.detail << "slope " << r.slope << ", smallest CI lower bound "
              << *std::min_element(r.lo.begin(), r.lo.end());

    // 8: CLT
    o8.require(r.ks.back() <= 0.05, "KS at n=2000 above 0.05");
    o8.require(r.ks.back() < r.ks.front(), "KS at n=2000 not below KS at n=250");
    o8.require(r.ratio <= 3, "KS*sqrt(n) ratio above 3");
    o8.detail << "KS(250) " << r.ks.front() << ", KS(2000) " << r.ks.back()
              << ", KS*sqrt(n) max/min " << r.ratio;

    // 7: mean order and independence of the body
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.k_list = {3};
    cfg.body.kind = BodyKind::ellipsoid;
    cfg.body.semi_axes = {1.5, 1, 1, 1};
    cfg.n_grid = {2000};
    cfg.replications = 2000;
    cfg.master_seed = parse_seed("e111");
    auto const t0 = Clock::now();
    auto const ell = summarize(run_binomial(cfg), 3);
    std::cout << "  ellipsoid n=2000 run: " << seconds_since(t0) << " s\n";
    double const sphere_ratio = r.mean.back() / r.n.back();
    double const ellipsoid_ratio = ell[0].mean / ell[0].cell;
    double const body_gap = std::fabs(ellipsoid_ratio - sphere_ratio) / sphere_ratio;
    double const n_gap = std::fabs(r.mean[3] / r.n[3] - r.mean[2] / r.n[2]) / (r.mean[2] / r.n[2]);
    o7.require(body_gap <= 0.1, "sphere and ellipsoid differ by more than 10%");
    o7.require(n_gap < 0.1, "mean f_3/n moves by 10% or more between n=1000 and 2000");
    o7.detail << "f_3/n sphere " << sphere_ratio << ", ellipsoid " << ellipsoid_ratio
              << " (gap " << body_gap << "), n=1000 vs 2000 gap " << n_gap;
}

void criterion_9(Outcome& o)
{
    TailConfig tc;
    tc.n = 1000;
    tc.replications = 2000;
    tc.seed = parse_seed("7a11");
    for (int i = 0; i <= 24; ++i)
        tc.r_grid.push_back(0.5 + 0.0125 * i);
    auto const t0 = Clock::now();
    auto const res = radius_tail_experiment(ConvexBodyModel::ball(4), tc);
    o.require(res.slope < 0, "slope not negative");
    o.require(res.r_squared >= 0.9, "r^2 below 0.9");
    o.detail << "slope " << res.slope << ", r^2 " << res.r_squared << " over "
             << res.points_in_window << " grid points, " << seconds_since(t0) << " s";
}

void criterion_10(Outcome& o)
{
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.k_list = {3};
    cfg.model = Model::poisson;
    cfg.t_grid = {250, 500, 1000, 2000};
    cfg.replications = 2000;
    cfg.master_seed = parse_seed("9015");
    auto const t0 = Clock::now();
    auto const s = summarize(run_experiment(cfg), 3);
    std::vector<double> t, var;
    for (auto const& c : s)
    {
        t.push_back(c.cell);
        var.push_back(c.variance);
    }
    auto const fit = fit_power_law(t, var);
    o.require(fit.slope >= 0.8 && fit.slope <= 1.2, "variance slope outside [0.8, 1.2]");
    o.require(s.back().ks <= 0.05, "KS at t=2000 above 0.05");
    o.detail << "slope " << fit.slope << ", KS(2000) " << s.back().ks << ", "
             << seconds_since(t0) << " s";
}

double quadrature_cap_area(int d, double rho, double h)
{
    double const theta0 = std::acos(std::clamp(1 - h / rho, -1.0, 1.0));
    double const m = d - 1;
    double const sphere = 2 * std::pow(std::numbers::pi, m / 2) / boost::math::tgamma(m / 2);
    auto integrand = [d](double th) { return std::pow(std::sin(th), d - 2); };
    double const integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, theta0, 12, 1e-14);
    return sphere * std::pow(rho, d - 1) * integral;
}

void criterion_11(Outcome& o)
{
    // Ball caps against quadrature
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int pair = 0; pair < 20; ++pair)
    {
        int const d = 2 + pair % 7;
        double const rho = 0.5 + 2 * u(g);
        std::vector<double> center(d);
        for (auto& c : center)
            c = u(g) - 0.5;
        auto const ball = ConvexBodyModel::ball(d, rho, center);
        RandomStream rng(derive_seed(11, 0, pair));
        auto const y = ball.sample_surface(rng);
        double const h = (0.02 + 1.9 * u(g)) * rho;
        double const area = cap_area(ball, make_cap(ball, y, h), rng).value;
        worst = std::max(worst, std::fabs(area / quadrature_cap_area(d, rho, h) - 1));
    }
    o.require(worst <= 1e-9, "ball cap area off by more than 1e-9 relative");

    // Ellipsoid cap scaling
    auto const ell = ConvexBodyModel::ellipsoid({1.5, 1, 1, 1});
    double band = 0;
    for (int axis : {0, 3})
    {
        std::vector<double> y(4, 0.0);
        y[axis] = ell.semi_axes()[axis];
        RandomStream rng(derive_seed(11, 1, axis));
        double lo = INFINITY, hi = 0;
        for (int k = 2; k <= 7; ++k)
        {
            double const h = std::ldexp(1.0, -k);
            double const scaled = cap_area(ell, make_cap(ell, y, h), rng, 1000000).value
                                  / std::pow(h, 1.5);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        band = std::max(band, hi / lo);
    }
    o.require(band <= 4, "ellipsoid cap band above 4");

    // Cap packing
    auto const sphere = ConvexBodyModel::ball(4);
    RandomStream rng(derive_seed(11, 2, 0));
    double plo = INFINITY, phi = 0;
    std::size_t violations = 0;
    std::vector<double> x(4);
    for (std::size_t n : {10u, 100u, 1000u})
    {
        auto const packing = pack_disjoint_caps(sphere, n, rng);
        double const scaled = packing.height * std::pow(double(n), 2.0 / 3);
        plo = std::min(plo, scaled);
        phi = std::max(phi, scaled);
        std::vector<Cap> caps;
        for (std::size_t i = 0; i < packing.centers.size(); ++i)
            caps.push_back(make_cap(sphere, packing.centers[i], packing.height));
        for (int s = 0; s < 1000000; ++s)
        {
            sphere.sample_surface(rng, x);
            int inside = 0;
            for (auto const& cap : caps)
                inside += cap_contains(sphere, cap, x);
            violations += inside > 1;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " points in two caps");
    o.require(phi / plo <= 4, "packing height band above 4");
    o.detail << "ball worst rel. error " << worst << ", ellipsoid band " << band
             << ", packing band " << phi / plo << ", overlap violations " << violations;
}

}  // namespace

// Usage: acceptance [work-dir [criterion...]]
int main(int argc, char** argv)
{
    std::cout << std::unitbuf;
    fs::path const work = argc > 1 ? fs::path(argv[1])
                                   : fs::temp_directory_path() / "rbp_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    std::vector<bool> selected(13, argc <= 2);
    for (int i = 2; i < argc; ++i)
        selected.at(std::stoi(argv[i])) = true;

    Outcome o[13];
    auto guarded = [&](std::initializer_list<int> ids, std::function<void()> body) {
        bool wanted = false;
        for (int id : ids)
            wanted = wanted || selected[id];
        if (!wanted)
            return;
        try
        {
            body();
        }
        catch (std::exception const& e)
        {
            for (int id : ids)
                o[id].require(false, std::string("exception: ") + e.what());
        }
    };
    guarded({1}, [&] { criterion_1(o[1]); });
    guarded({2}, [&] { criterion_2(o[2]); });
    guarded({3, 5}, [&] { criteria_3_and_5(o[3], o[5]); });
    guarded({4}, [&] { criterion_4(o[4]); });
    guarded({6, 7, 8, 12}, [&] { criteria_grid(work, o[6], o[7], o[8], o[12]); });
    guarded({9}, [&] { criterion_9(o[9]); });
    guarded({10}, [&] { criterion_10(o[10]); });
    guarded({11}, [&] { criterion_11(o[11]); });

    int failures = 0;
    for (int i = 1; i <= 12; ++i)
    {
        if (!selected[i])
            continue;
        std::cout << "criterion " << i << ": " << (o[i].pass ? "PASS" : "FAIL") << " ("
                  << o[i].detail.str() << ")";
        if (!o[i].pass)
            std::cout << " failed: " << o[i].failures;
        std::cout << '\n';
        failures += !o[i].pass;
    }
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " failing")
              << '\n';
    return failures == 0 ? 0 : 1;
}

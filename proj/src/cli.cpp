#include "rbp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbp/body.hpp"
#include "rbp/combinatorics.hpp"
#include "rbp/error.hpp"
#include "rbp/experiments.hpp"
#include "rbp/faces.hpp"
#include "rbp/hull.hpp"
#include "rbp/stabilization.hpp"
#include "rbp/statistics.hpp"

#ifndef RBP_VERSION
#    define RBP_VERSION "0.0.0"
#endif

namespace rbp
{
namespace
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

//! Input or output file problem
class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Flags as typed on the command line; empty means "not given"
struct Flags
{
    std::string config;
    std::string seed;
    std::string out{"."};
    std::string in;
    std::string body;
    std::string n_list;
    std::string t_list;
    std::string k_list;
    std::string r_grid;
    std::string input;
    int threads{0};
    int dim{0};
    long long reps{0};
    double height{0};
    long long samples{0};
};

char const* const kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  internal error\n"
    "  2  usage error (unknown subcommand or bad flag)\n"
    "  3  configuration error or invalid input for the subcommand\n"
    "  4  file could not be read or written, or is malformed\n"
    "  5  degenerate input (points not in general position)\n"
    "  6  capacity exceeded\n"
    "  7  insufficient data for an estimate\n";

json default_config()
{
    json c;
    c["body"] = {{"kind", "ball"},
                 {"radius", 1.0},
                 {"center", json::array()},
                 {"semi_axes", json::array()}};
    c["d"] = 4;
    c["k_list"] = json::array();  // empty: d-1
    c["model"] = "binomial";
    c["n_grid"] = {250, 500, 1000, 2000};
    c["t_grid"] = {250, 500, 1000, 2000};
    c["replications"] = 100;
    c["master_seed"] = format_seed(ExperimentConfig{}.master_seed);
    c["threads"] = 1;
    // Calibrated for d = 4, n = 1000 on the unit sphere
    json grid = json::array();
    for (int i = 0; i <= 24; ++i)
        grid.push_back(0.5 + 0.0125 * i);
    c["r_grid"] = grid;
    c["height"] = 0.1;
    c["samples"] = 200000;
    return c;
}

template<class T>
std::vector<T> parse_list(std::string const& text, char const* what)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        std::stringstream is(item);
        T value;
        if (!(is >> value) || !(is >> std::ws).eof())
            throw ConfigError(std::string("cannot parse ") + what + " value '" + item + "'");
        out.push_back(value);
    }
    if (out.empty())
        throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

void merge_config_file(json& cfg, std::string const& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open config file '" + path + "'");
    json doc;
    try
    {
        doc = json::parse(is);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    for (auto const& [key, value] : doc.items())
    {
        if (!cfg.contains(key))
            throw ConfigError("unknown config key '" + key + "'");
        if (key == "body")
        {
            if (!value.is_object())
                throw ConfigError("config key 'body' must be an object");
            for (auto const& [bk, bv] : value.items())
            {
                if (!cfg["body"].contains(bk))
                    throw ConfigError("unknown config key 'body." + bk + "'");
                cfg["body"][bk] = bv;
            }
        }
        else
        {
            cfg[key] = value;
        }
    }
}

void apply_flags(json& cfg, Flags const& f)
{
    if (!f.body.empty())
        cfg["body"]["kind"] = f.body;
    if (f.dim != 0)
        cfg["d"] = f.dim;
    if (!f.k_list.empty())
        cfg["k_list"] = parse_list<int>(f.k_list, "k");
    if (!f.n_list.empty() && !f.t_list.empty())
        throw ConfigError("--n and --t select different models; give only one");
    if (!f.n_list.empty())
    {
        cfg["n_grid"] = parse_list<long long>(f.n_list, "n");
        cfg["model"] = "binomial";
    }
    if (!f.t_list.empty())
    {
        cfg["t_grid"] = parse_list<double>(f.t_list, "t");
        cfg["model"] = "poisson";
    }
    if (f.reps != 0)
        cfg["replications"] = f.reps;
    if (!f.seed.empty())
        cfg["master_seed"] = f.seed;
    if (f.threads != 0)
        cfg["threads"] = f.threads;
    if (!f.r_grid.empty())
        cfg["r_grid"] = parse_list<double>(f.r_grid, "r");
    if (f.height != 0)
        cfg["height"] = f.height;
    if (f.samples != 0)
        cfg["samples"] = f.samples;
    if (cfg["k_list"].empty() && cfg["d"].is_number_integer())
        cfg["k_list"] = {cfg["d"].get<int>() - 1};
}

//! Typed view of the resolved configuration document
struct Settings
{
    ExperimentConfig exp;
    std::vector<double> r_grid;
    double height{0};
    std::size_t samples{0};
};

Settings to_settings(json const& cfg)
{
    try
    {
        Settings s;
        auto const& b = cfg.at("body");
        std::string const kind = b.at("kind").get<std::string>();
        if (kind == "ball")
            s.exp.body.kind = BodyKind::ball;
        else if (kind == "ellipsoid")
            s.exp.body.kind = BodyKind::ellipsoid;
        else
            throw ConfigError("body.kind must be 'ball' or 'ellipsoid', got '" + kind + "'");
        s.exp.body.radius = b.at("radius").get<double>();
        s.exp.body.center = b.at("center").get<std::vector<double>>();
        s.exp.body.semi_axes = b.at("semi_axes").get<std::vector<double>>();
        s.exp.d = cfg.at("d").get<int>();
        s.exp.k_list = cfg.at("k_list").get<std::vector<int>>();
        std::string const model = cfg.at("model").get<std::string>();
        if (model == "binomial")
            s.exp.model = Model::binomial;
        else if (model == "poisson")
            s.exp.model = Model::poisson;
        else
            throw ConfigError("model must be 'binomial' or 'poisson', got '" + model + "'");
        s.exp.n_grid = cfg.at("n_grid").get<std::vector<std::int64_t>>();
        s.exp.t_grid = cfg.at("t_grid").get<std::vector<double>>();
        auto const reps = cfg.at("replications").get<long long>();
        if (reps < 0)
            throw ConfigError("replications must be positive");
        s.exp.replications = static_cast<std::size_t>(reps);
        auto const& seed = cfg.at("master_seed");
        try
        {
            s.exp.master_seed = seed.is_string() ? parse_seed(seed.get<std::string>())
                                                 : seed.get<std::uint64_t>();
        }
        catch (std::invalid_argument const& e)
        {
            throw ConfigError(e.what());
        }
        s.exp.threads = cfg.at("threads").get<int>();
        s.r_grid = cfg.at("r_grid").get<std::vector<double>>();
        s.height = cfg.at("height").get<double>();
        auto const samples = cfg.at("samples").get<long long>();
        if (samples <= 0)
            throw ConfigError("samples must be positive");
        s.samples = static_cast<std::size_t>(samples);
        return s;
    }
    catch (json::exception const& e)
    {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
// File helpers

PointSet read_points(std::string const& path, int expected_dim)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open point file '" + path + "'");
    PointSet pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        auto const first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::stringstream ss(line);
        std::vector<double> coords;
        std::string token;
        while (ss >> token)
        {
            char* end = nullptr;
            double const v = std::strtod(token.c_str(), &end);
            if (end == token.c_str() || *end != '\0')
            {
                throw IoError(path + ":" + std::to_string(lineno) + ": '" + token
                              + "' is not a number");
            }
            coords.push_back(v);
        }
        if (pts.dimension() == 0)
        {
            int const d = static_cast<int>(coords.size());
            if (expected_dim != 0 && d != expected_dim)
            {
                throw IoError(path + ":" + std::to_string(lineno) + ": expected "
                              + std::to_string(expected_dim) + " coordinates");
            }
            if (d < 2 || d > kMaxDimension)
                throw IoError(path + ": unsupported dimension " + std::to_string(d));
            pts = PointSet(d);
        }
        if (static_cast<int>(coords.size()) != pts.dimension())
        {
            throw IoError(path + ":" + std::to_string(lineno) + ": expected "
                          + std::to_string(pts.dimension()) + " coordinates");
        }
        try
        {
            pts.push_back(coords);
        }
        catch (std::invalid_argument const& e)
        {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (pts.empty())
        throw IoError("point file '" + path + "' contains no points");
    return pts;
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class OutputDir
{
  public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir)) {}

    void ensure() const
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
    }

    //! Open a file for writing and remember it for the manifest
    std::ofstream open(std::string const& name)
    {
        ensure();
        auto const path = (fs::path(dir_) / name).string();
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw IoError("cannot write '" + path + "'");
        files_.push_back(name);
        return os;
    }

    static void close(std::ofstream& os, std::string const& name)
    {
        os.close();
        if (!os)
            throw IoError("error while writing '" + name + "'");
    }

    std::string const& path() const noexcept { return dir_; }
    std::vector<std::string> const& files() const noexcept { return files_; }

  private:
    std::string dir_;
    std::vector<std::string> files_;
};

std::string join(std::vector<std::int64_t> const& v, char const* sep = " ")
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

//---------------------------------------------------------------------------//
// Subcommands

struct Context
{
    Flags const& flags;
    json const& config;
    Settings const& settings;
    OutputDir& out_dir;
    std::ostream& out;
    json& results;
};

void write_facet_dump(std::ostream& os, HullComplex const& hull)
{
    for (std::size_t f = 0; f < hull.num_facets(); ++f)
    {
        auto const fv = hull.facet(static_cast<FacetIndex>(f));
        os << "facet";
        for (auto v : fv.vertices)
            os << ' ' << v;
        for (double c : fv.normal)
            os << ' ' << format_double(c);
        os << ' ' << format_double(fv.offset) << '\n';
    }
}

void report_fvector(Context& ctx, FVector const& f, int d)
{
    bool const euler = euler_check(f, d);
    bool const ds = dehn_sommerville_check(f, d);
    ctx.out << "f-vector: " << join(f.counts) << '\n'
            << "euler: " << (euler ? "pass" : "fail") << '\n'
            << "dehn-sommerville: " << (ds ? "pass" : "fail") << '\n';
    ctx.results["f_vector"] = f.counts;
    ctx.results["euler"] = euler;
    ctx.results["dehn_sommerville"] = ds;
}

int run_hull(Context& ctx, bool dump)
{
    auto const pts = read_points(ctx.flags.input, ctx.flags.dim);
    auto const hull = incremental_hull(pts);
    auto const f = f_vector(hull);
    if (dump)
    {
        auto os = ctx.out_dir.open("hull_facets.txt");
        write_facet_dump(os, hull);
        OutputDir::close(os, "hull_facets.txt");
    }
    report_fvector(ctx, f, pts.dimension());
    return kExitOk;
}

int run_classify(Context& ctx)
{
    auto const pts = read_points(ctx.flags.input, ctx.flags.dim);
    int const d = pts.dimension();
    auto const label = classify_d_plus_2(pts);
    std::vector<std::int64_t> formula{d + 2};
    for (int k = 1; k < d; ++k)
        formula.push_back(type_f_count(d, label.j, k));
    auto const hull_f = f_vector(incremental_hull(pts));
    ctx.out << label.name() << '\n'
            << "formula f-vector: " << join(formula) << '\n'
            << "hull f-vector: " << join(hull_f.counts) << '\n';
    ctx.results["type"] = label.name();
    ctx.results["formula_f_vector"] = formula;
    ctx.results["hull_f_vector"] = hull_f.counts;
    return kExitOk;
}

int run_sample(Context& ctx)
{
    auto const& s = ctx.settings;
    auto const body = s.exp.body.make(s.exp.d);
    if (s.exp.n_grid.empty() || s.exp.n_grid.front() < 1)
        throw ConfigError("sample needs a positive n");
    auto const n = static_cast<std::size_t>(s.exp.n_grid.front());
    RandomStream rng(derive_seed(s.exp.master_seed, 0, 0));
    auto const pts = body.sample_surface(rng, n);
    auto os = ctx.out_dir.open("samples.txt");
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        auto const p = pts[i];
        for (std::size_t j = 0; j < p.size(); ++j)
            os << (j ? " " : "") << format_double(p[j]);
        os << '\n';
    }
    OutputDir::close(os, "samples.txt");
    ctx.out << "wrote " << n << " points to "
            << (fs::path(ctx.out_dir.path()) / "samples.txt").string() << '\n';
    return kExitOk;
}

int run_cap(Context& ctx)
{
    auto const& s = ctx.settings;
    auto const body = s.exp.body.make(s.exp.d);
    // Cap centered at the boundary point in direction e_d
    std::vector<double> y = body.center();
    y.back() += body.semi_axes().back();
    auto const cap = make_cap(body, y, s.height);
    RandomStream rng(derive_seed(s.exp.master_seed, 0, 0));
    auto const area = cap_area(body, cap, rng, s.samples);
    double const total = body.surface_area();
    ctx.out << "cap area: " << format_double(area.value) << " +- "
            << format_double(area.std_error) << '\n'
            << "surface area: " << format_double(total) << '\n';
    ctx.results["cap_center"] = y;
    ctx.results["height"] = s.height;
    ctx.results["area"] = area.value;
    ctx.results["std_error"] = area.std_error;
    ctx.results["surface_area"] = total;
    return kExitOk;
}

int run_stabilize(Context& ctx)
{
    auto const& s = ctx.settings;
    auto const body = s.exp.body.make(s.exp.d);
    TailConfig tc;
    if (s.exp.n_grid.empty())
        throw ConfigError("stabilize needs n");
    tc.n = s.exp.n_grid.front();
    if (s.r_grid.empty())
        throw ConfigError("r_grid is empty");
    for (double r : s.r_grid)
        if (!(r > 0))
            throw ConfigError("r_grid values must be positive");
    tc.r_grid = s.r_grid;
    tc.replications = s.exp.replications;
    tc.seed = s.exp.master_seed;
    tc.threads = s.exp.threads;
    TailResult res;
    try
    {
        res = radius_tail_experiment(body, tc);
    }
    catch (std::invalid_argument const& e)
    {
        throw ConfigError(e.what());
    }
    auto os = ctx.out_dir.open("tail.csv");
    os << "r,n,survival,stderr\n";
    for (auto const& row : res.rows)
    {
        os << format_double(row.r) << ',' << row.n << ',' << format_double(row.survival)
           << ',' << format_double(row.std_error) << '\n';
    }
    OutputDir::close(os, "tail.csv");
    ctx.out << "tail fit: slope " << format_double(res.slope) << " r^2 "
            << format_double(res.r_squared) << " over " << res.points_in_window
            << " grid points\n";
    ctx.results["slope"] = res.slope;
    ctx.results["intercept"] = res.intercept;
    ctx.results["r_squared"] = res.r_squared;
    ctx.results["points_in_window"] = res.points_in_window;
    return kExitOk;
}

json summary_json(SummaryStats const& s, ExperimentConfig const& cfg)
{
    json j;
    j["body"] = to_string(cfg.body.kind);
    j["d"] = cfg.d;
    j["k"] = s.k;
    j["model"] = to_string(cfg.model);
    j["cell"] = s.cell;
    j["mean"] = s.mean;
    j["var"] = s.variance;
    j["var_ci_lo"] = s.var_ci_lo;
    j["var_ci_hi"] = s.var_ci_hi;
    j["ks"] = s.ks;
    j["m_effective"] = s.m_effective;
    j["degenerate_count"] = s.degenerate_count;
    return j;
}

void write_plot(OutputDir& dir,
                std::string const& name,
                std::vector<double> const& x,
                std::vector<double> const& y,
                std::vector<double> const& se)
{
    auto os = dir.open(name);
    os << "x,y,stderr\n";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << format_double(x[i]) << ',' << format_double(y[i]) << ',' << format_double(se[i]) << '\n';
    OutputDir::close(os, name);
}

//! Summaries, fits and plot data for a finished table
void emit_report(Context& ctx, ReplicationTable const& table)
{
    auto const& cfg = table.config;
    json summaries = json::array();
    json analysis = json::array();
    for (int k : cfg.k_list)
    {
        auto const stats = summarize(table, k);
        std::vector<double> x;
        std::vector<double> mean_y, mean_se, var_y, var_se, ks_y, ks_norm, zero;
        for (auto const& s : stats)
        {
            summaries.push_back(summary_json(s, cfg));
            x.push_back(s.cell);
            mean_y.push_back(s.mean / s.cell);
            mean_se.push_back(std::sqrt(s.variance / static_cast<double>(s.m_effective)) / s.cell);
            var_y.push_back(s.variance);
            var_se.push_back((s.var_ci_hi - s.var_ci_lo) / (2 * 1.959963984540054));
            ks_y.push_back(s.ks);
            ks_norm.push_back(s.ks * std::sqrt(s.cell));
            zero.push_back(0);
            ctx.out << "k=" << k << " cell=" << format_cell(s.cell) << " mean=" << s.mean
                    << " var=" << s.variance << " ci=[" << s.var_ci_lo << ", " << s.var_ci_hi
                    << "] ks=" << s.ks << " m=" << s.m_effective << '\n';
        }
        std::string const suffix = "_k" + std::to_string(k) + ".csv";
        write_plot(ctx.out_dir, "plot_mean" + suffix, x, mean_y, mean_se);
        write_plot(ctx.out_dir, "plot_variance" + suffix, x, var_y, var_se);
        write_plot(ctx.out_dir, "plot_ks" + suffix, x, ks_y, zero);
        write_plot(ctx.out_dir, "plot_ks_normalized" + suffix, x, ks_norm, zero);

        json a;
        a["k"] = k;
        a["normalization"] = "sample mean and standard deviation (plug-in)";
        bool positive = true;
        for (double v : var_y)
            positive = positive && v > 0;
        if (x.size() >= 3 && positive)
        {
            auto const fit = fit_power_law(x, var_y);
            a["variance_fit"] = {{"slope", fit.slope},
                                 {"intercept", fit.intercept},
                                 {"r_squared", fit.r_squared}};
            ctx.out << "k=" << k << " variance slope=" << fit.slope << " r^2=" << fit.r_squared << '\n';
        }
        if (x.size() >= 2 && positive)
        {
            auto const clt = clt_report(stats);
            a["clt"] = {{"cells", clt.cells},
                        {"ks", clt.ks},
                        {"ks_sqrt_cell", clt.normalized},
                        {"ratio", clt.ratio},
                        {"flagged", clt.flagged}};
            ctx.out << "k=" << k << " ks*sqrt(cell) max/min=" << clt.ratio
                    << (clt.flagged ? " (flagged: above 3)" : "") << '\n';
        }
        analysis.push_back(a);
    }
    auto os = ctx.out_dir.open("summary.json");
    os << summaries.dump(2) << '\n';
    OutputDir::close(os, "summary.json");
    auto ao = ctx.out_dir.open("analysis.json");
    ao << analysis.dump(2) << '\n';
    OutputDir::close(ao, "analysis.json");
    ctx.results["audited_replications"] = table.audited;
}

int run_experiment_cmd(Context& ctx)
{
    auto const& cfg = ctx.settings.exp;
    cfg.validate();
    auto const table = run_experiment(cfg);
    for (auto const& cell : table.cells)
    {
        auto const name = replication_file_name(cell.model, cell.parameter);
        auto os = ctx.out_dir.open(name);
        write_replication_csv(os, cell, cfg.d);
        OutputDir::close(os, name);
    }
    emit_report(ctx, table);
    return kExitOk;
}

int run_report(Context& ctx)
{
    // Replication files are read from --in (default: the output directory)
    std::string const in = ctx.flags.in.empty() ? ctx.out_dir.path() : ctx.flags.in;
    ReplicationTable table;
    table.config = ctx.settings.exp;
    for (double param : table.config.cells())
    {
        auto const path = (fs::path(in) / replication_file_name(table.config.model, param)).string();
        std::ifstream is(path);
        if (!is)
            throw IoError("cannot open '" + path + "'");
        try
        {
            table.cells.push_back(read_replication_csv(is, table.config.model, param));
        }
        catch (std::runtime_error const& e)
        {
            throw IoError(path + ": " + e.what());
        }
    }
    emit_report(ctx, table);
    return kExitOk;
}

void write_manifest(OutputDir& dir,
                    std::string const& subcommand,
                    std::vector<std::string> const& args,
                    json const& config,
                    json const& results,
                    int status,
                    std::string const& message)
{
    json m;
    m["tool"] = "rbp";
    m["version"] = RBP_VERSION;
    m["subcommand"] = subcommand;
    m["arguments"] = args;
    m["config"] = config;
    m["master_seed"] = config.value("master_seed", std::string());
    m["outputs"] = dir.files();
    m["results"] = results;
    m["exit_code"] = status;
    if (!message.empty())
        m["error"] = message;
    dir.ensure();
    std::ofstream os((fs::path(dir.path()) / "manifest.json").string(), std::ios::binary);
    os << m.dump(2) << '\n';
    if (!os)
        throw IoError("cannot write manifest.json");
}

}  // namespace

int parse_and_dispatch(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    Flags flags;
    CLI::App app{"Random boundary polytopes: hulls, face statistics and Monte Carlo experiments",
                 "rbp"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", RBP_VERSION);

    app.add_option("--config", flags.config, "JSON configuration file");
    app.add_option("--seed", flags.seed, "Master seed (64-bit hexadecimal)");
    app.add_option("--out", flags.out, "Output directory")->capture_default_str();
    app.add_option("--threads", flags.threads, "Worker threads (speed only, never results)")
        ->check(CLI::PositiveNumber);
    app.add_option("--body", flags.body, "Body kind")->check(CLI::IsMember({"ball", "ellipsoid"}));
    app.add_option("--dim", flags.dim, "Ambient dimension d")->check(CLI::Range(2, kMaxDimension));
    app.add_option("--n", flags.n_list, "Point counts, comma separated (binomial model)");
    app.add_option("--t", flags.t_list, "Poisson intensities, comma separated");
    app.add_option("--reps", flags.reps, "Replications per grid cell")->check(CLI::PositiveNumber);
    app.add_option("--k", flags.k_list, "Face dimensions, comma separated");

    auto* hull = app.add_subcommand("hull", "Hull of a point file: facet dump and f-vector");
    hull->add_option("points", flags.input, "Point file, one point per line")->required();
    auto* fvec = app.add_subcommand("fvector", "f-vector and identity checks of a point file");
    fvec->add_option("points", flags.input, "Point file")->required();
    auto* classify = app.add_subcommand("classify", "Combinatorial type of d+2 points");
    classify->add_option("points", flags.input, "Point file with d+2 points")->required();
    app.add_subcommand("sample", "Write n uniform boundary samples");
    auto* cap = app.add_subcommand("cap", "Area of the cap at the boundary point in direction e_d");
    cap->add_option("--height", flags.height, "Cap height")->check(CLI::PositiveNumber);
    cap->add_option("--samples", flags.samples, "Monte Carlo samples for ellipsoids")
        ->check(CLI::PositiveNumber);
    auto* stabilize = app.add_subcommand("stabilize", "Tail of the stabilization radius");
    stabilize->add_option("--r-grid", flags.r_grid, "Radii, comma separated");
    app.add_subcommand("experiment", "Replicated hull statistics");
    auto* report = app.add_subcommand("report", "Summaries and plot data from replication CSVs");
    report->add_option("--in", flags.in, "Directory holding the replication CSVs");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (CLI::CallForAllHelp const&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    }
    catch (CLI::CallForVersion const&)
    {
        out << RBP_VERSION << '\n';
        return kExitOk;
    }
    catch (CLI::ParseError const& e)
    {
        err << "rbp: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    std::string const subcommand = app.get_subcommands().front()->get_name();
    std::vector<std::string> args(argv + 1, argv + argc);
    OutputDir dir(flags.out);
    json config = default_config();
    json results = json::object();
    int status = kExitOk;
    std::string message;
    try
    {
        if (!flags.config.empty())
            merge_config_file(config, flags.config);
        apply_flags(config, flags);
        Settings const settings = to_settings(config);
        config["master_seed"] = format_seed(settings.exp.master_seed);
        Context ctx{flags, config, settings, dir, out, results};
        if (subcommand == "hull")
            status = run_hull(ctx, true);
        else if (subcommand == "fvector")
            status = run_hull(ctx, false);
        else if (subcommand == "classify")
            status = run_classify(ctx);
        else if (subcommand == "sample")
            status = run_sample(ctx);
        else if (subcommand == "cap")
            status = run_cap(ctx);
        else if (subcommand == "stabilize")
            status = run_stabilize(ctx);
        else if (subcommand == "experiment")
            status = run_experiment_cmd(ctx);
        else if (subcommand == "report")
            status = run_report(ctx);
    }
    catch (ConfigError const& e)
    {
        status = kExitConfig;
        message = e.what();
    }
    catch (IoError const& e)
    {
        status = kExitIo;
        message = e.what();
    }
    catch (GeneralPositionError const& e)
    {
        status = kExitDegenerate;
        message = e.what();
    }
    catch (CapacityError const& e)
    {
        status = kExitCapacity;
        message = e.what();
    }
    catch (InsufficientDataError const& e)
    {
        status = kExitInsufficientData;
        message = e.what();
    }
    catch (std::invalid_argument const& e)
    {
        // Precondition failures on user-supplied input
        status = kExitConfig;
        message = e.what();
    }
    catch (std::exception const& e)
    {
        status = kExitInternal;
        message = e.what();
    }
    if (!message.empty())
        err << "rbp " << subcommand << ": " << message << '\n';

    try
    {
        write_manifest(dir, subcommand, args, config, results, status, message);
    }
    catch (std::exception const& e)
    {
        err << "rbp: " << e.what() << '\n';
        if (status == kExitOk)
            status = kExitIo;
    }
    return status;
}

}  // namespace rbp

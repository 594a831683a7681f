#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwa/atoms.hpp"
#include "rwa/dists.hpp"
#include "rwa/error.hpp"
#include "rwa/kernel.hpp"
#include "rwa/limits.hpp"
#include "rwa/mc.hpp"
#include "rwa/stieltjes.hpp"
#include "rwa/text.hpp"
#include "rwa/variance.hpp"

namespace rwa::cli {

using nlohmann::json;

std::vector<double> parse_grid(std::string_view text) {
    const auto t = trim(text);
    if (t.find(':') != std::string_view::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw ParseError("grid must be lo:hi:steps", std::string(t));
        const auto lo = parse_double(parts[0]);
        if (!lo) throw ParseError("bad grid bound", std::string(parts[0]));
        const auto hi = parse_double(parts[1]);
        if (!hi) throw ParseError("bad grid bound", std::string(parts[1]));
        const auto steps = parse_int(parts[2]);
        if (!steps || *steps < 1) throw ParseError("grid step count must be a positive integer", std::string(parts[2]));
        if (*steps == 1 && *lo != *hi) throw ParseError("a one-point grid needs lo == hi", std::string(t));
        if (*hi < *lo) throw ParseError("grid needs lo <= hi", std::string(t));
        std::vector<double> g(static_cast<std::size_t>(*steps));
        for (long long k = 0; k < *steps; ++k)
            g[static_cast<std::size_t>(k)] =
                *steps == 1 ? *lo : *lo + (*hi - *lo) * static_cast<double>(k) / static_cast<double>(*steps - 1);
        return g;
    }
    std::vector<double> g;
    for (const auto tok : split(t, ',')) {
        const auto v = parse_double(tok);
        if (!v || !std::isfinite(*v)) throw ParseError("bad grid value", std::string(tok));
        g.push_back(*v);
    }
    if (g.empty()) throw ParseError("empty grid", std::string(text));
    return g;
}

std::vector<int> parse_int_list(std::string_view text, int min_value) {
    std::vector<int> out;
    for (const auto tok : split(text, ',')) {
        const auto v = parse_int(tok);
        if (!v || *v < min_value || *v > 1'000'000'000)
            throw ParseError("expected an integer >= " + std::to_string(min_value), std::string(tok));
        out.push_back(static_cast<int>(*v));
    }
    if (out.empty()) throw ParseError("empty integer list", std::string(text));
    return out;
}

std::string manifest_path(const std::string& output) { return output + ".manifest.json"; }

namespace {

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
    std::string format;  // empty: the command's default
};

// Column names plus typed cells; rendered as CSV or as a JSON array.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

std::string render_cell(const json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

std::string render_csv(const Table& t) {
    std::string s;
    for (std::size_t c = 0; c < t.columns.size(); ++c) s += (c ? "," : "") + t.columns[c];
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) s += ',';
            s += render_cell(row[c]);
        }
        s += '\n';
    }
    return s;
}

json table_json(const Table& t) {
    json a = json::array();
    for (const auto& row : t.rows) {
        json o = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) o[t.columns[c]] = row[c];
        a.push_back(std::move(o));
    }
    return a;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file " + path);
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing output file " + path);
}

// Arguments that determine the output: everything except --out / --threads.
std::vector<std::string> reproducible_args(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "-o" || a == "--out" || a == "--threads") {
            ++i;
            continue;
        }
        if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
        if (a.size() > 2 && a.rfind("-o", 0) == 0 && a[2] != '-') continue;
        kept.push_back(a);
    }
    return kept;
}

class Runner {
public:
    Runner(const std::vector<std::string>& args, const Globals& g, std::ostream& out, std::ostream& err)
        : args_(args), g_(g), out_(out), err_(err) {}

    std::ostream& err() { return err_; }
    const Globals& globals() const { return g_; }
    unsigned threads() const { return g_.threads; }

    // Writes the primary output and, for files, its manifest.
    void emit(const std::string& command, const std::string& payload, json params, json extra = json::object()) {
        if (g_.out.empty()) {
            out_ << payload;
            return;
        }
        write_file(g_.out, payload);
        json m = {{"command", command},
                  {"version", RWA_LAB_VERSION},
                  {"seed", g_.seed},
                  {"params", std::move(params)},
                  {"args", reproducible_args(args_)},
                  {"outputs", json::array({g_.out})}};
        for (auto& [k, v] : extra.items()) m[k] = v;
        write_file(manifest_path(g_.out), m.dump(2) + "\n");
    }

    void emit_table(const std::string& command, const Table& t, json params, json extra = json::object()) {
        const std::string fmt = g_.format.empty() ? "csv" : g_.format;
        emit(command, fmt == "json" ? table_json(t).dump(2) + "\n" : render_csv(t), std::move(params),
             std::move(extra));
    }

private:
    const std::vector<std::string>& args_;
    Globals g_;
    std::ostream& out_;
    std::ostream& err_;
};

std::vector<Dist> marginals_for(const WeightScheme& scheme, const std::string& text) {
    auto m = parse_dist_list(text);
    if (m.size() == 1 && scheme.size() > 1) m.resize(scheme.size(), m.front());
    if (m.size() != scheme.size())
        throw InvalidArgument("scheme has " + std::to_string(scheme.size()) + " blocks but " +
                              std::to_string(m.size()) + " marginals were given");
    return m;
}

json specs_json(const std::vector<Dist>& ds) {
    json a = json::array();
    for (const auto& d : ds) a.push_back(d.spec());
    return a;
}

// ---- commands ------------------------------------------------------------

struct KernelCdfArgs {
    std::string atoms, grid;
    double merge_tol = kDefaultMergeTolerance;
};

void kernel_cdf(Runner& r, const KernelCdfArgs& a) {
    const auto parsed = parse_atoms(a.atoms);
    const auto cfg = normalize(parsed.atoms, parsed.scheme, a.merge_tol);
    if (cfg.size() != parsed.atoms.size())
        r.err() << "warning: tied atoms merged: " << a.atoms << " -> " << cfg.to_string() << "\n";
    Table t{{"z", "cdf"}, {}};
    for (double z : parse_grid(a.grid)) t.rows.push_back({z, weisberg_cdf(cfg, z)});
    r.emit_table("kernel-cdf", t,
                 {{"atoms", a.atoms}, {"normalized_atoms", cfg.to_string()}, {"grid", a.grid},
                  {"merge_tol", a.merge_tol}});
}

struct MixtureArgs {
    std::string scheme, marginals, grid, method = "quadrature";
    std::optional<std::size_t> budget;
};

void mixture(Runner& r, const MixtureArgs& a) {
    const auto scheme = parse_scheme(a.scheme);
    const auto marg = marginals_for(scheme, a.marginals);
    const bool quad = a.method == "quadrature";
    const std::size_t budget = a.budget.value_or(quad ? 48 : 100000);
    const RngState rng{r.globals().seed, 0};
    Table t{{"z", "cdf", "std_error"}, {}};
    for (double z : parse_grid(a.grid)) {
        const auto est = mixture_cdf(scheme, marg, z, quad ? MixtureMethod::Quadrature : MixtureMethod::MonteCarlo,
                                     budget, rng, r.threads());
        t.rows.push_back({z, est.value, est.std_error});
    }
    r.emit_table("mixture-cdf", t,
                 {{"scheme", scheme.to_string()}, {"marginals", specs_json(marg)}, {"grid", a.grid},
                  {"method", a.method}, {"budget", budget}});
}

struct SampleArgs {
    std::string scheme, marginals;
    std::size_t count = 0;
    std::uint64_t stream = 0;
};

void sample(Runner& r, const SampleArgs& a) {
    const auto scheme = parse_scheme(a.scheme);
    const auto marg = marginals_for(scheme, a.marginals);
    const auto xs = sample_rwa(scheme, marg, a.count, {r.globals().seed, a.stream}, r.threads());
    Table t{{"value"}, {}};
    t.rows.reserve(xs.size());
    for (double x : xs) t.rows.push_back({x});
    const json meta = {{"scheme", scheme.to_string()},
                       {"marginals", specs_json(marg)},
                       {"seed", r.globals().seed},
                       {"stream", a.stream},
                       {"count", a.count}};
    r.emit_table("sample", t, meta, meta);
}

cplx z_from_json(const json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
    if (v.is_object()) return {v.value("re", 0.0), v.value("im", 0.0)};
    throw ParseError("z point must be a number, [re, im] or {re, im}", v.dump());
}

std::string list_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (!v.is_array()) throw ParseError("expected a string or an array", v.dump());
    std::string s;
    for (const auto& e : v) {
        if (!s.empty()) s += ';';
        s += e.is_string() ? e.get<std::string>() : e.dump();
    }
    return s;
}

struct StieltjesArgs {
    std::string config;
};

void check_stieltjes(Runner& r, const StieltjesArgs& a) {
    std::ifstream f(a.config, std::ios::binary);
    if (!f) throw IoError("cannot read config file " + a.config);
    std::stringstream ss;
    ss << f.rdbuf();
    const json cfg = json::parse(ss.str());

    const std::string identity = cfg.value("identity", "theorem1");
    const auto scheme_text = list_text(cfg.at("scheme"));
    std::string scheme_commas = scheme_text;
    std::replace(scheme_commas.begin(), scheme_commas.end(), ';', ',');
    const auto scheme = parse_scheme(scheme_commas);
    const auto marg = marginals_for(scheme, list_text(cfg.at("marginals")));

    std::vector<cplx> zs;
    for (const auto& z : cfg.at("z_points")) zs.push_back(z_from_json(z));
    if (zs.empty()) throw InvalidArgument("config lists no z_points");

    const json& mix = cfg.at("mixture");
    const std::string kind = mix.value("kind", "analytic");
    std::optional<TransformSource> source;
    json mix_meta = {{"kind", kind}};
    if (kind == "analytic") {
        const auto d = parse_dist(mix.at("dist").get<std::string>());
        mix_meta["dist"] = d.spec();
        source = d;
    } else if (kind == "empirical") {
        const auto count = mix.value("count", std::size_t{1'000'000});
        const auto seed = mix.value("seed", r.globals().seed);
        const auto stream = mix.value("stream", std::uint64_t{0});
        if (count < 2) throw InvalidArgument("empirical mixture needs at least 2 samples");
        source = EmpiricalLaw(sample_rwa(scheme, marg, count, {seed, stream}, r.threads()));
        mix_meta.update({{"count", count}, {"seed", seed}, {"stream", stream}});
    } else {
        throw ParseError("mixture kind must be analytic or empirical", kind);
    }

    ResidualReport report;
    if (identity == "theorem1") {
        report = theorem1_residual(scheme, marg, *source, zs);
    } else if (identity == "remark1" || identity == "eq31") {
        if (scheme.size() != 2) throw InvalidArgument(identity + " needs a two-block scheme");
        if (identity == "remark1") {
            report = remark1_residual(scheme.multiplicity(0), scheme.multiplicity(1), marg[0], marg[1], *source, zs);
        } else {
            if (scheme.nstar() != 2 || marg[0].spec() != marg[1].spec())
                throw InvalidArgument("eq31 needs scheme 1,1 and identical marginals");
            report = eq31_residual(marg[0], *source, zs);
        }
    } else {
        throw ParseError("unknown identity", identity);
    }

    const bool empirical = kind == "empirical";
    const double tol = cfg.value("tolerance", 1e-7);
    const double se_k = cfg.value("se_multiplier", 3.0);
    const bool pass = empirical ? report.within_standard_errors(se_k) : report.max_rel_residual() < tol;

    json params = {{"config", a.config}, {"identity", identity}, {"scheme", scheme.to_string()},
                   {"marginals", specs_json(marg)}, {"mixture", mix_meta}};
    if (r.globals().format == "csv") {
        Table t{{"z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_res", "rel_res", "std_err"}, {}};
        for (const auto& p : report.points)
            t.rows.push_back({p.z.real(), p.z.imag(), p.lhs.real(), p.lhs.imag(), p.rhs.real(), p.rhs.imag(),
                              p.abs_res, p.rel_res, p.std_error});
        r.emit_table("check-stieltjes", t, params);
    } else {
        json j = report.to_json();
        j["pass"] = pass;
        if (empirical)
            j["se_multiplier"] = se_k;
        else
            j["tolerance"] = tol;
        r.emit("check-stieltjes", j.dump(2) + "\n", params);
    }
    if (!pass) {
        std::ostringstream msg;
        msg << identity << " residual check failed: max rel_res " << format_double(report.max_rel_residual());
        throw Error(msg.str());
    }
}

Table curve_table(std::span<const int> ns, std::span<const double> thetas, double sigma2) {
    Table t{{"n", "theta", "esq_sum", "variance"}, {}};
    for (int n : ns) {
        const auto c = variance_curve(n, thetas, sigma2);
        for (std::size_t k = 0; k < c.theta.size(); ++k) t.rows.push_back({n, c.theta[k], c.esq_sum[k], c.variance[k]});
    }
    return t;
}

struct CurveArgs {
    std::string n = "10,20,40", theta = "1:5:81";
    double sigma2 = 1.0;
};

void variance_curve_cmd(Runner& r, const CurveArgs& a) {
    const auto ns = parse_int_list(a.n, 2);
    const auto thetas = parse_grid(a.theta);
    r.emit_table("variance-curve", curve_table(ns, thetas, a.sigma2),
                 {{"n", ns}, {"theta", a.theta}, {"sigma2", a.sigma2}});
}

void fig1(Runner& r) {
    const std::vector<int> ns = {10, 20, 40};
    std::vector<double> thetas(81);
    for (std::size_t k = 0; k < thetas.size(); ++k) thetas[k] = 1.0 + 0.05 * static_cast<double>(k);
    r.emit_table("fig1", curve_table(ns, thetas, 1.0), {{"n", ns}, {"theta", "1:5:81"}, {"sigma2", 1.0}});
}

struct ConvergeArgs {
    std::string marginal = "exp:1", n = "100,1000,10000";
    std::optional<double> mu;
    double eps = 0.05;
    std::size_t replicates = 1000;
};

void converge(Runner& r, const ConvergeArgs& a) {
    const auto d = parse_dist(a.marginal);
    const auto ns = parse_int_list(a.n, 2);
    const double mu = a.mu ? *a.mu : d.mean().value_or(0.0);
    const auto table = convergence_experiment(d, mu, ns, a.eps, a.replicates, {r.globals().seed, 0}, r.threads());
    Table t{{"n", "prob_exceed", "eps", "max_spacing_mean", "max_spacing_p95", "replicates", "seed"}, {}};
    for (const auto& row : table.rows)
        t.rows.push_back({row.n, row.prob_exceed, row.eps, row.max_spacing_mean, row.max_spacing_p95, row.replicates,
                          row.seed});
    r.emit_table("converge", t,
                 {{"marginal", d.spec()}, {"mu", mu}, {"n", ns}, {"eps", a.eps}, {"replicates", a.replicates}});
}

struct MaxSpacingArgs {
    std::string n = "10,100,1000,10000";
    std::size_t replicates = 10000;
};

void max_spacing(Runner& r, const MaxSpacingArgs& a) {
    const auto ns = parse_int_list(a.n, 2);
    Table t{{"n", "replicates", "mean", "p50", "p95"}, {}};
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto s = max_spacing_stats(ns[i], a.replicates, RngState{r.globals().seed, 0}.substream(i), r.threads());
        t.rows.push_back({s.n, s.replicates, s.mean, s.p50, s.p95});
    }
    r.emit_table("max-spacing", t, {{"n", ns}, {"replicates", a.replicates}});
}

int replay(const std::string& manifest, const Globals& g, std::ostream& out, std::ostream& err) {
    std::ifstream f(manifest, std::ios::binary);
    if (!f) throw IoError("cannot read manifest " + manifest);
    std::stringstream ss;
    ss << f.rdbuf();
    const json m = json::parse(ss.str());
    auto args = m.at("args").get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "replay") throw InvalidArgument("a manifest cannot replay a replay");
    const std::string target = !g.out.empty() ? g.out : m.at("outputs").at(0).get<std::string>();
    args.push_back("--out");
    args.push_back(target);
    if (g.threads) {
        args.push_back("--threads");
        args.push_back(std::to_string(g.threads));
    }
    return run_cli(args, out, err);
}

int fail(std::ostream& err, int code, const std::string& what) {
    err << "error: " << what << "\n";
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomly weighted averages: kernels, transforms, sampling and limit experiments", "rwa-lab"};
    app.set_version_flag("--version", std::string(RWA_LAB_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0: RWA_LAB_THREADS, else all cores)");
    app.add_option("-o,--out", g.out, "Output file (default: stdout); a .manifest.json is written next to it");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    KernelCdfArgs kc;
    auto* kcmd = app.add_subcommand("kernel-cdf", "Conditional CDF of the average given its atoms");
    kcmd->add_option("--atoms", kc.atoms, "x:m pairs, e.g. 3:1,2:1,1:1")->required();
    kcmd->add_option("--grid", kc.grid, "lo:hi:steps or a comma-separated list")->required();
    kcmd->add_option("--merge-tol", kc.merge_tol, "Atoms closer than this are merged")->capture_default_str();

    MixtureArgs mx;
    auto* mcmd = app.add_subcommand("mixture-cdf", "Unconditional CDF of the average");
    mcmd->add_option("--scheme", mx.scheme, "Multiplicities, e.g. 1,1,1")->required();
    mcmd->add_option("--marginals", mx.marginals, "Marginal laws, e.g. arcsin,arcsin,arcsin")->required();
    mcmd->add_option("--grid", mx.grid, "lo:hi:steps or a comma-separated list")->required();
    mcmd->add_option("--method", mx.method)->check(CLI::IsMember({"quadrature", "mc"}))->capture_default_str();
    mcmd->add_option("--budget", mx.budget, "Nodes per axis (quadrature) or samples (mc)");

    SampleArgs sp;
    auto* scmd = app.add_subcommand("sample", "Draw samples of the randomly weighted average");
    scmd->add_option("--scheme", sp.scheme, "Multiplicities, e.g. 1,1,1")->required();
    scmd->add_option("--marginals", sp.marginals, "Marginal laws")->required();
    scmd->add_option("--count", sp.count, "Number of samples")->required();
    scmd->add_option("--stream", sp.stream, "Random stream")->capture_default_str();

    StieltjesArgs st;
    auto* tcmd = app.add_subcommand("check-stieltjes", "Residuals of a transform identity (JSON config)");
    tcmd->add_option("config", st.config, "Config file")->required();

    CurveArgs cv;
    auto* vcmd = app.add_subcommand("variance-curve", "E[sum W^2] over power-spacing weights");
    vcmd->add_option("--n", cv.n, "Comma-separated n values")->capture_default_str();
    vcmd->add_option("--theta", cv.theta, "lo:hi:steps or a list")->capture_default_str();
    vcmd->add_option("--sigma2", cv.sigma2, "Atom variance")->capture_default_str();

    auto* fcmd = app.add_subcommand("fig1", "Variance curves for n = 10, 20, 40 and theta in [1, 5]");

    ConvergeArgs cg;
    auto* ccmd = app.add_subcommand("converge", "P(|S_n - mu| > eps) for uniform-spacings weights");
    ccmd->add_option("--marginal", cg.marginal)->capture_default_str();
    ccmd->add_option("--mu", cg.mu, "Target mean (default: the marginal's mean)");
    ccmd->add_option("--n", cg.n, "Comma-separated n values")->capture_default_str();
    ccmd->add_option("--eps", cg.eps)->capture_default_str();
    ccmd->add_option("--replicates", cg.replicates)->capture_default_str();

    MaxSpacingArgs ms;
    auto* xcmd = app.add_subcommand("max-spacing", "Largest uniform spacing statistics");
    xcmd->add_option("--n", ms.n, "Comma-separated n values")->capture_default_str();
    xcmd->add_option("--replicates", ms.replicates)->capture_default_str();

    std::string manifest;
    auto* rcmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rcmd->add_option("manifest", manifest, "Manifest file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Runner r(args, g, out, err);
        if (kcmd->parsed()) kernel_cdf(r, kc);
        else if (mcmd->parsed()) mixture(r, mx);
        else if (scmd->parsed()) sample(r, sp);
        else if (tcmd->parsed()) check_stieltjes(r, st);
        else if (vcmd->parsed()) variance_curve_cmd(r, cv);
        else if (fcmd->parsed()) fig1(r);
        else if (ccmd->parsed()) converge(r, cg);
        else if (xcmd->parsed()) max_spacing(r, ms);
        else if (rcmd->parsed()) return replay(manifest, g, out, err);
        return kExitOk;
    } catch (const InvalidArgument& e) {
        return fail(err, kExitUsage, e.what());
    } catch (const json::exception& e) {
        return fail(err, kExitUsage, std::string("config: ") + e.what());
    } catch (const IoError& e) {
        return fail(err, kExitIo, e.what());
    } catch (const std::exception& e) {
        return fail(err, kExitNumeric, e.what());
    }
}

}  // namespace rwa::cli

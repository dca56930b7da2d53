// Command-line front end: simulate, estimate, test, mle, pairs, oracle-check,
// experiment, bench. Result documents are JSON with full provenance (tool
// version, input hash, seed, configuration snapshot).
//
// Exit codes: 0 success; 1 unexpected failure; 2 input parse error;
// 3 computed but degenerate (flags set); 4 capacity exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "lcr/errors.hpp"
#include "lcr/experiments.hpp"
#include "lcr/inference.hpp"
#include "lcr/mle.hpp"
#include "lcr/model.hpp"
#include "lcr/numeric.hpp"
#include "lcr/rng.hpp"
#include "lcr/version.hpp"

using nlohmann::json;
using namespace lcr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitCapacity = 4;

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

json provenance(const std::string& input_path, std::uint64_t seed, int pair_id,
                const json& config) {
    json p;
    p["tool"] = kToolName;
    p["version"] = kToolVersion;
    p["seed"] = seed;
    if (!input_path.empty()) {
        p["input"] = input_path;
        p["input_fnv1a64"] = fnv1a64_file(input_path);
    }
    p["pair_id"] = pair_id;
    p["config"] = config;
    return p;
}

void write_output(const json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << doc.dump(2) << "\n";
}

json lcr_to_json(const inference::LcrResult& r) {
    json j;
    j["qa"] = r.qa;
    j["qb"] = r.qb;
    j["c0"] = r.c0;
    j["pair_id"] = r.pair_id;
    j["threshold"] = r.threshold;
    j["rho_hat"] = r.rho_hat ? json(*r.rho_hat) : json();
    j["rho_star"] = r.rho_star ? json(*r.rho_star) : json();
    switch (r.status) {
        case inference::CountStatus::ok: j["status"] = "ok"; break;
        case inference::CountStatus::qa_zero: j["status"] = "qa_zero"; break;
        case inference::CountStatus::qb_zero: j["status"] = "qb_zero"; break;
        case inference::CountStatus::both_zero: j["status"] = "both_zero"; break;
    }
    return j;
}

json variance_to_json(const inference::VarianceEstimates& v) {
    json j;
    j["v_hat"] = v.v_hat;
    j["w_hat"] = v.w_hat;
    j["sigma_hat"] = v.v_hat > 0 ? std::sqrt(v.v_hat) : 0.0;
    j["snr_hat"] = v.snr_hat;
    j["snr_hat_simple"] = v.snr_hat_simple;
    j["zero_variance"] = v.zero_variance;
    return j;
}

json test_to_json(const inference::TestResult& t) {
    json j;
    j["rho0"] = t.rho0;
    j["level"] = t.level;
    j["z_crit"] = t.z_crit;
    j["psi_star"] = t.psi_star ? json(*t.psi_star) : json();
    j["phi_star"] = t.phi_star ? json(*t.phi_star) : json();
    j["p_value_psi"] = t.p_value_psi ? json(*t.p_value_psi) : json();
    j["p_value_phi"] = t.p_value_phi ? json(*t.p_value_phi) : json();
    j["reject_psi"] = t.reject_psi ? json(*t.reject_psi) : json();
    j["reject_phi"] = t.reject_phi ? json(*t.reject_phi) : json();
    j["degenerate"] = t.degenerate;
    if (!t.flag.empty()) j["flag"] = t.flag;
    return j;
}

json mle_to_json(const mle::MleFit& f) {
    json j;
    j["n"] = f.n;
    j["rho"] = f.rho;
    j["gamma"] = f.gamma;
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["converged"] = f.converged;
    j["diverged"] = f.diverged;
    j["iterations"] = f.iterations;
    j["max_abs_param"] = f.max_abs_param;
    j["log_likelihood"] = f.log_likelihood;
    j["grad_max_norm"] = f.grad_max_norm;
    j["mle_definitely_nonexistent"] = f.existence.definitely_nonexistent;
    json flags = json::array();
    for (std::size_t i = 0; i < f.existence.node_flags.size(); ++i)
        if (f.existence.node_flags[i]) flags.push_back(i);
    j["boundary_nodes"] = flags;
    return j;
}

json diagnostics_to_json(const inference::TheoryDiagnostics& diag) {
    json d;
    d["v_exact"] = diag.v_exact;
    d["expected_qa"] = diag.eqa;
    d["expected_qb"] = diag.eqb;
    d["snr_exact"] = diag.snr_exact;
    d["r_n"] = diag.r_n;
    d["r_n_minus"] = diag.r_n_minus;
    d["rho_tilde"] = diag.rho_tilde;
    d["c_mu_nu_eta"] = diag.c_mu_nu_eta;
    d["regime"] = inference::regime_name(diag.regime);
    d["g1_ok"] = diag.g1_ok;
    d["g2_ok"] = diag.g2_ok;
    d["sp1_ok"] = diag.sp1_ok;
    d["sp2_ok"] = diag.sp2_ok;
    d["exact_mode"] = diag.exact_mode;
    return d;
}

json graph_summary(const graph::DirectedGraph& g) {
    json j;
    j["n"] = g.n();
    j["directed_edges"] = g.directed_edges();
    j["oneway_dyads"] = g.oneway_dyads();
    j["mutual_dyads"] = g.mutual_dyads();
    j["d_max"] = g.degrees().d_max;
    j["duplicates_dropped"] = g.duplicate_count();
    j["selfloops_dropped"] = g.selfloop_count();
    return j;
}

model::ModelParams params_from_json(const json& doc, std::optional<double>* theta_out,
                                    std::vector<int>* community_out) {
    if (!doc.contains("schema") || doc["schema"] != "lcr-params/1")
        throw ParseError("parameter file must declare schema lcr-params/1");
    const int n = doc.at("n").get<int>();
    model::ModelParams params(n, doc.at("rho").get<double>(), doc.at("gamma").get<double>(),
                              doc.at("alpha").get<std::vector<double>>(),
                              doc.at("beta").get<std::vector<double>>());
    if (theta_out && doc.contains("theta") && !doc["theta"].is_null())
        *theta_out = doc["theta"].get<double>();
    if (community_out && doc.contains("community") && !doc["community"].is_null())
        *community_out = doc["community"].get<std::vector<int>>();
    return params;
}

json params_to_json(const model::ModelParams& p, std::optional<double> theta,
                    const std::vector<int>& community) {
    json j;
    j["schema"] = "lcr-params/1";
    j["n"] = p.n();
    j["rho"] = p.rho();
    j["gamma"] = p.gamma();
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    if (theta) {
        j["theta"] = *theta;
        j["community"] = community;
    }
    return j;
}

struct CommonOpts {
    std::string input;
    int n_hint = -1;
    std::string out;
};

int cmd_simulate(const std::string& params_path, int n, double rho, double gamma,
                 const std::string& gamma_rule, const std::string& rho_rule, bool het,
                 std::optional<double> theta, std::uint64_t seed, const std::string& out_edges,
                 const std::string& out_params, const json& config) {
    std::optional<double> file_theta;
    std::vector<int> community;
    std::optional<model::ModelParams> params;
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw ParseError("cannot open parameter file: " + params_path);
        json doc = json::parse(in);
        params = params_from_json(doc, &file_theta, &community);
        if (!theta) theta = file_theta;
    } else {
        if (!gamma_rule.empty())
            gamma = experiments::resolve_gamma(experiments::gamma_rule_from_name(gamma_rule), n);
        if (!rho_rule.empty())
            rho = experiments::resolve_rho(experiments::rho_rule_from_name(rho_rule), n);
        if (het)
            params = experiments::draw_params(n, gamma, rho, derive_stream(seed, 0x4e57u));
        else
            params = model::ModelParams(n, rho, gamma, std::vector<double>(n, 0.0),
                                        std::vector<double>(n, 0.0));
    }

    graph::DirectedGraph g;
    if (theta) {
        model::MisspecParams mp(*params, *theta, community);
        g = model::sample_misspecified(mp, seed);
        community = mp.community;
    } else {
        g = model::sample(*params, seed);
    }

    {
        std::ofstream out(out_edges);
        if (!out) throw std::runtime_error("cannot write " + out_edges);
        graph::write_edge_list(out, g);
    }
    json pdoc = params_to_json(*params, theta, community);
    pdoc["provenance"] = provenance("", seed, 0, config);
    pdoc["graph"] = graph_summary(g);
    write_output(pdoc, out_params);
    return kExitOk;
}

int cmd_estimate(const CommonOpts& c, int pair_id, std::uint64_t seed, const json& config) {
    const auto file = graph::read_edge_list_file(c.input, c.n_hint);
    const auto pair = cycles::quad_pair(pair_id);
    const auto lcr = inference::estimate(file.graph, pair);
    json doc;
    doc["schema"] = "lcr-result/1";
    doc["provenance"] = provenance(c.input, seed, pair_id, config);
    doc["graph"] = graph_summary(file.graph);
    doc["lcr"] = lcr_to_json(lcr);
    if (file.label_mode) doc["labels"] = file.labels;
    write_output(doc, c.out);
    return lcr.degenerate() ? kExitDegenerate : kExitOk;
}

int cmd_test(const CommonOpts& c, double rho0, double level, std::uint64_t seed,
             const std::string& params_path, const json& config) {
    const auto file = graph::read_edge_list_file(c.input, c.n_hint);
    const auto lcr = inference::estimate(file.graph);
    inference::VarianceEstimates var;
    inference::TestResult tr;
    if (lcr.status == inference::CountStatus::both_zero) {
        var.zero_variance = var.zero_w = true;
        tr = inference::make_test(lcr, var, rho0, level);
    } else {
        var = inference::variance_hat(file.graph, *lcr.rho_plugin(), lcr.qa);
        tr = inference::make_test(lcr, var, rho0, level);
    }

    json doc;
    doc["schema"] = "lcr-result/1";
    doc["provenance"] = provenance(c.input, seed, 1, config);
    doc["graph"] = graph_summary(file.graph);
    doc["lcr"] = lcr_to_json(lcr);
    doc["variance"] = variance_to_json(var);
    doc["test"] = test_to_json(tr);
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw ParseError("cannot open parameter file: " + params_path);
        json pdoc = json::parse(in);
        const auto params = params_from_json(pdoc, nullptr, nullptr);
        doc["theory_diagnostics"] = diagnostics_to_json(inference::theory_diagnostics(params));
    }
    if (file.label_mode) doc["labels"] = file.labels;
    write_output(doc, c.out);
    return (lcr.degenerate() || tr.degenerate) ? kExitDegenerate : kExitOk;
}

int cmd_mle(const CommonOpts& c, const mle::SolverConfig& cfg, bool with_lrt,
            std::uint64_t seed, const json& config) {
    const auto file = graph::read_edge_list_file(c.input, c.n_hint);
    const auto fit = mle::fit(file.graph, cfg);
    json doc;
    doc["schema"] = "lcr-result/1";
    doc["provenance"] = provenance(c.input, seed, 0, config);
    doc["graph"] = graph_summary(file.graph);
    doc["mle"] = mle_to_json(fit);
    if (with_lrt) {
        const auto lr = mle::lrt(file.graph, cfg);
        json j;
        j["defined"] = lr.defined;
        if (lr.defined) {
            j["statistic"] = lr.statistic;
            j["p_value"] = lr.p_value;
        }
        j["flag"] = lr.flag;
        doc["lrt"] = j;
    }
    write_output(doc, c.out);
    return fit.converged ? kExitOk : kExitDegenerate;
}

int cmd_pairs(int m, const std::string& out_path) {
    const auto pairs = cycles::pair_search(m);
    std::ostringstream os;
    os << "class_id\tpattern_a\tpattern_b\tc0\n";
    for (const auto& p : pairs)
        os << p.class_id << '\t' << p.a.to_string() << '\t' << p.b.to_string() << '\t' << p.c0
           << '\n';
    if (m == 4) {
        const auto d = cycles::default_pair();
        os << "# default estimation pair: " << d.a.to_string() << " / " << d.b.to_string()
           << " (c0=" << d.c0 << ")\n";
    }
    if (out_path.empty() || out_path == "-")
        std::cout << os.str();
    else {
        std::ofstream out(out_path);
        out << os.str();
    }
    return kExitOk;
}

int cmd_oracle_check(int trials, std::uint64_t seed, int inject_fault) {
    cycles::fast_count_fault_injection = inject_fault;
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
        all_ok = all_ok && ok;
    };

    {
        bool ok = true;
        Rng rng(seed);
        const auto pairs = cycles::quad_pairs();
        for (int t = 0; t < trials && ok; ++t) {
            const int n = 8 + static_cast<int>(rng.next_u64() % 7);
            std::vector<double> a(n), b(n);
            double am = 0, bm = 0;
            for (int i = 0; i < n; ++i) {
                a[i] = 1.2 * rng.next_double() - 0.6;
                b[i] = 1.2 * rng.next_double() - 0.6;
                am += a[i];
                bm += b[i];
            }
            for (int i = 0; i < n; ++i) {
                a[i] -= am / n;
                b[i] -= bm / n;
            }
            model::ModelParams params(n, 2.0 * rng.next_double() - 1.0,
                                      -1.5 * rng.next_double(), a, b);
            const auto g = model::sample(params, rng.next_u64());
            for (const auto& pr : pairs) {
                ok = ok && cycles::fast_count(g, pr.a) == cycles::brute_force_count(g, pr.a);
                ok = ok && cycles::fast_count(g, pr.b) == cycles::brute_force_count(g, pr.b);
            }
        }
        report("fast counts equal brute force (" + std::to_string(trials) + " graphs)", ok);
    }
    {
        bool ok = true;
        Rng rng(derive_stream(seed, 2));
        for (int t = 0; t < 10 && ok; ++t) {
            const int n = 12;
            std::vector<double> a(n, 0.0), b(n, 0.0);
            for (int i = 0; i < n; ++i) {
                a[i] = 0.8 * rng.next_double() - 0.4;
                b[i] = 0.8 * rng.next_double() - 0.4;
            }
            model::ModelParams params(n, 2.0 * rng.next_double() - 1.0, -rng.next_double(), a,
                                      b);
            for (const auto& pr : cycles::quad_pairs()) {
                const double ratio = cycles::expected_count(params, pr.a) /
                                     cycles::expected_count(params, pr.b);
                ok = ok && std::abs(ratio / std::exp(pr.c0 * params.rho()) - 1.0) < 1e-10;
            }
        }
        report("expected-count ratios equal exp(c0 rho)", ok);
    }
    {
        const bool ok = cycles::pair_search(3).empty() && cycles::pair_search(5).empty() &&
                        cycles::pair_search(7).empty();
        report("odd-length searches are empty", ok);
    }
    {
        const auto found = cycles::pair_search(4);
        int c2 = 0;
        const auto dflt = cycles::default_pair();
        const std::string want =
            dflt.a.canonical().to_string() + "|" + dflt.b.canonical().to_string();
        bool has_default = false;
        for (const auto& p : found) {
            if (p.c0 == 2) ++c2;
            if (p.a.canonical().to_string() + "|" + p.b.canonical().to_string() == want)
                has_default = true;
        }
        report("length-4 search finds 3 classes incl. default (one with c0=2)",
               found.size() == 3 && c2 == 1 && has_default);
    }
    {
        bool ok = true;
        Rng rng(derive_stream(seed, 3));
        for (int t = 0; t < 200 && ok; ++t) {
            const int m = 3 + static_cast<int>(rng.next_u64() % 4);
            std::vector<EdgeType> codes(m);
            for (int k = 0; k < m; ++k) codes[k] = static_cast<EdgeType>(rng.next_u64() % 4);
            const cycles::CyclePattern pat(codes);
            const int n = m + 2;
            std::vector<double> a(n), b(n);
            double am = 0, bm = 0;
            for (int i = 0; i < n; ++i) {
                a[i] = 0.5 * rng.next_double() - 0.25;
                b[i] = 0.5 * rng.next_double() - 0.25;
                am += a[i];
                bm += b[i];
            }
            for (int i = 0; i < n; ++i) {
                a[i] -= am / n;
                b[i] -= bm / n;
            }
            model::ModelParams params(n, rng.next_double(), -rng.next_double(), a, b);
            const auto plr = model::plr(params);
            std::vector<int> nodes(m);
            for (int k = 0; k < m; ++k) nodes[k] = k;
            double direct = 1.0;
            for (int k = 0; k < m; ++k)
                direct *= model::omega_tilde_entry(plr, params.rho(), codes[k], nodes[k],
                                                   nodes[(k + 1) % m]);
            const double sym = cycles::monomial(pat).evaluate(plr, params.rho(), nodes);
            ok = ok && std::abs(sym / direct - 1.0) < 1e-12;
        }
        report("pattern monomials match literal products", ok);
    }
    cycles::fast_count_fault_injection = 0;
    return all_ok ? kExitOk : kExitFailure;
}

int cmd_experiment(const std::string& kind, int n, const std::string& gamma_rule,
                   const std::string& rho_rule, double rho_explicit, double gamma_explicit,
                   const std::vector<double>& rho_grid, const std::vector<double>& theta_grid,
                   double rho0, double level, int reps, std::uint64_t seed, int threads,
                   bool with_mle, bool with_lrt, const std::string& out_dir,
                   const json& config) {
    namespace ex = experiments;
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(fs::path(out_dir) / name);
        if (!f) throw std::runtime_error("cannot write into " + out_dir);
        return f;
    };
    json summary;
    summary["schema"] = "lcr-experiment/1";
    summary["kind"] = kind;
    summary["provenance"] = provenance("", seed, 1, config);
    double wall = 0.0;

    const auto grule = gamma_rule.empty() ? ex::GammaRule::explicit_value
                                          : ex::gamma_rule_from_name(gamma_rule);
    const double gamma =
        grule == ex::GammaRule::explicit_value ? gamma_explicit : ex::resolve_gamma(grule, n);
    const auto rrule =
        rho_rule.empty() ? ex::RhoRule::explicit_value : ex::rho_rule_from_name(rho_rule);
    const double rho =
        rrule == ex::RhoRule::explicit_value ? rho_explicit : ex::resolve_rho(rrule, n);

    if (kind == "estimation") {
        ex::ExperimentDesign design;
        design.n = n;
        design.gamma_rule = grule;
        design.gamma_value = gamma_explicit;
        design.rho_rule = rrule;
        design.rho_value = rho_explicit;
        auto cell = ex::run_estimation_cell(n, gamma, rho, reps, seed, 1, threads, with_mle);
        ex::EstimationTable table;
        table.rows.push_back(
            {ex::gamma_rule_name(design.gamma_rule), ex::rho_rule_name(design.rho_rule), cell});
        auto f = open("cells.tsv");
        ex::write_estimation_csv(f, table);
        wall = cell.wall_seconds;
        summary["mean_abs_err"] = cell.mean_abs_err;
        if (with_mle) summary["mle_nonexist_frac"] = cell.mle_nonexist_frac;
    } else if (kind == "power") {
        auto study =
            ex::run_power_study(n, grule, rho_grid, rho0, level, reps, seed, threads, with_lrt);
        auto f = open("power.tsv");
        ex::write_power_csv(f, study);
        wall = study.wall_seconds;
        summary["cells"] = study.cells.size();
    } else if (kind == "null") {
        auto calib = ex::run_null_calibration(n, gamma, rho, reps, seed, 1, threads);
        auto f = open("qq.tsv");
        ex::write_qq_data(f, calib);
        summary["ks_stat"] = calib.ks_stat;
        summary["ks_pvalue"] = calib.ks_pvalue;
        summary["ks_defined"] = calib.ks_defined;
        summary["skipped"] = calib.skipped;
        wall = calib.wall_seconds;
    } else if (kind == "misspec") {
        auto rep = ex::run_misspec_bias(n, gamma, rho, theta_grid, reps, seed, threads);
        auto f = open("misspec.tsv");
        ex::write_misspec_csv(f, rep);
        wall = rep.wall_seconds;
        summary["cells"] = rep.cells.size();
    } else if (kind == "pairs") {
        auto rep = ex::run_pair_comparison(n, gamma, rho, reps, seed, threads);
        auto f = open("pairs.tsv");
        ex::write_pair_comparison_csv(f, rep);
        wall = rep.wall_seconds;
        summary["rows"] = rep.rows.size();
    } else if (kind == "variance-ratio") {
        auto rep = ex::run_variance_ratio(n, gamma, rho, reps, seed, 1, threads);
        auto f = open("variance_ratio.tsv");
        f << "rep\tratio\n";
        for (std::size_t i = 0; i < rep.ratios.size(); ++i)
            f << i << '\t' << ex::format_double(rep.ratios[i]) << '\n';
        summary["skipped"] = rep.skipped;
        wall = rep.wall_seconds;
    } else if (kind == "ustat-variance") {
        auto rep = ex::run_ustat_variance(n, gamma, rho, reps, seed, 1, threads);
        summary["v_exact"] = rep.v_exact;
        summary["empirical_var"] = rep.empirical_var;
        summary["ratio"] = rep.ratio;
        wall = rep.wall_seconds;
    } else {
        throw std::runtime_error("unknown experiment kind: " + kind);
    }

    {
        auto f = open("summary.json");
        f << summary.dump(2) << "\n";
    }
    {
        // Timing sidecar: deliberately not part of the deterministic report.
        auto f = open("timing.txt");
        f << "wall_seconds\t" << wall << "\n";
    }
    return kExitOk;
}

int cmd_bench(const std::vector<int>& n_grid, double degree, std::uint64_t seed,
              const std::string& out_path) {
    const auto rep = experiments::bench_counting(n_grid, degree, seed);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        out = &file;
    }
    experiments::write_bench_csv(*out, rep);
    *out << "# fitted_exponent\t" << experiments::format_double(rep.fitted_exponent) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reciprocity estimation and testing for directed networks"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.set_config("--config");
    app.require_subcommand(1);

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    app.add_option("--threads", threads, "worker thread cap for experiments");

    auto* sim = app.add_subcommand("simulate", "draw a graph from the model");
    std::string sim_params, sim_gamma_rule, sim_rho_rule, sim_out = "edges.tsv",
                            sim_params_out = "-";
    int sim_n = 100;
    double sim_rho = 0.0, sim_gamma = -1.0, sim_theta = 0.0;
    bool sim_het = false;
    std::uint64_t sim_seed = 1;
    sim->add_option("--params", sim_params, "parameter file (lcr-params/1 JSON)");
    sim->add_option("--n", sim_n, "node count");
    sim->add_option("--rho", sim_rho, "reciprocity parameter");
    sim->add_option("--gamma", sim_gamma, "density parameter");
    sim->add_option("--gamma-rule", sim_gamma_rule, "g1|g2|g3 (overrides --gamma)");
    sim->add_option("--rho-rule", sim_rho_rule, "r1..r5 (overrides --rho)");
    sim->add_flag("--het", sim_het, "draw standard heterogeneity (normal/uniform, centered)");
    auto* sim_theta_opt =
        sim->add_option("--theta", sim_theta, "two-community contamination strength");
    sim->add_option("--seed", sim_seed, "RNG seed (recorded in output)");
    sim->add_option("--out", sim_out, "edge-list output path");
    sim->add_option("--params-out", sim_params_out, "realized parameter JSON output");

    auto* est = app.add_subcommand("estimate", "LCR point estimate from an edge list");
    CommonOpts est_c;
    int est_pair = 1;
    std::uint64_t est_seed = 0;
    est->add_option("--input", est_c.input, "edge-list file")->required();
    est->add_option("--n", est_c.n_hint, "declared node count (default: max id + 1)");
    est->add_option("--pair", est_pair, "cancellation pair id (1, 2 or 3)");
    est->add_option("--seed", est_seed, "seed recorded in provenance");
    est->add_option("--out", est_c.out, "result JSON path (default stdout)");

    auto* tst = app.add_subcommand("test", "estimate, variance, and the two test statistics");
    CommonOpts tst_c;
    double tst_rho0 = 0.0, tst_level = 0.05;
    std::string tst_params;
    std::uint64_t tst_seed = 0;
    tst->add_option("--input", tst_c.input, "edge-list file")->required();
    tst->add_option("--n", tst_c.n_hint, "declared node count");
    tst->add_option("--rho0", tst_rho0, "null value");
    tst->add_option("--level", tst_level, "two-sided level alpha");
    tst->add_option("--true-params", tst_params,
                    "optional parameter file: adds population diagnostics");
    tst->add_option("--seed", tst_seed, "seed recorded in provenance");
    tst->add_option("--out", tst_c.out, "result JSON path (default stdout)");

    auto* ml = app.add_subcommand("mle", "baseline maximum-likelihood fit");
    CommonOpts ml_c;
    mle::SolverConfig ml_cfg;
    bool ml_lrt = false;
    std::uint64_t ml_seed = 0;
    ml->add_option("--input", ml_c.input, "edge-list file")->required();
    ml->add_option("--n", ml_c.n_hint, "declared node count");
    ml->add_option("--tol", ml_cfg.tol, "gradient max-norm tolerance");
    ml->add_option("--max-iter", ml_cfg.max_iter, "coordinate-ascent sweep cap");
    ml->add_option("--bound", ml_cfg.bound, "divergence bound on |parameter|");
    ml->add_flag("--lrt", ml_lrt, "also run the rho=0 likelihood-ratio test");
    ml->add_option("--seed", ml_seed, "seed recorded in provenance");
    ml->add_option("--out", ml_c.out, "result JSON path (default stdout)");

    auto* prs = app.add_subcommand("pairs", "enumerate cancellation pairs");
    int prs_m = 4;
    std::string prs_out;
    prs->add_option("--m", prs_m, "cycle length (3..8)");
    prs->add_option("--out", prs_out, "table output path (default stdout)");

    auto* orc = app.add_subcommand("oracle-check", "run the small-n verification suite");
    int orc_trials = 60;
    std::uint64_t orc_seed = 12345;
    int orc_fault = 0;
    orc->add_option("--trials", orc_trials, "number of fast-vs-brute graphs");
    orc->add_option("--seed", orc_seed, "RNG seed");
    orc->add_option("--inject-fault", orc_fault,
                    "add this constant to one complement-expansion term (testing hook)");

    auto* exp = app.add_subcommand("experiment", "Monte Carlo studies with reports");
    std::string exp_kind, exp_gamma_rule, exp_rho_rule, exp_out = "experiment-out";
    int exp_n = 500, exp_reps = 100;
    double exp_rho = 0.0, exp_gamma = -1.0, exp_rho0 = 0.0, exp_level = 0.05;
    std::vector<double> exp_rho_grid, exp_theta_grid;
    std::uint64_t exp_seed = 1;
    bool exp_mle = false, exp_lrt = false;
    exp->add_option("--kind", exp_kind,
                    "estimation|power|null|misspec|pairs|variance-ratio|ustat-variance")
        ->required();
    exp->add_option("--n", exp_n, "node count");
    exp->add_option("--gamma-rule", exp_gamma_rule, "g1|g2|g3");
    exp->add_option("--gamma", exp_gamma, "explicit gamma (when no rule)");
    exp->add_option("--rho-rule", exp_rho_rule, "r1..r5");
    exp->add_option("--rho", exp_rho, "explicit rho (when no rule)");
    exp->add_option("--rho-grid", exp_rho_grid, "alternative rho values (power study)")
        ->delimiter(',');
    exp->add_option("--theta-grid", exp_theta_grid, "contamination grid (misspec)")
        ->delimiter(',');
    exp->add_option("--rho0", exp_rho0, "null value (power study)");
    exp->add_option("--level", exp_level, "test level");
    exp->add_option("--reps", exp_reps, "replications per cell");
    exp->add_option("--seed", exp_seed, "master seed");
    exp->add_flag("--mle", exp_mle, "include the maximum-likelihood column");
    exp->add_flag("--lrt", exp_lrt, "include the likelihood-ratio column");
    exp->add_option("--out", exp_out, "output directory");

    auto* bch = app.add_subcommand("bench", "time the counting kernels");
    std::vector<int> bch_grid = {500, 1000, 2000, 4000};
    double bch_degree = 20.0;
    std::uint64_t bch_seed = 1;
    std::string bch_out;
    bch->add_option("--n-grid", bch_grid, "node counts")->delimiter(',');
    bch->add_option("--degree", bch_degree, "expected degree held fixed across n");
    bch->add_option("--seed", bch_seed, "RNG seed");
    bch->add_option("--out", bch_out, "table output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    json config;
    for (const auto* opt : app.get_subcommands()[0]->get_options()) {
        if (!opt->get_name().empty() && opt->count() > 0)
            config[opt->get_name()] =
                opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
    }

    try {
        if (*sim)
            return cmd_simulate(sim_params, sim_n, sim_rho, sim_gamma, sim_gamma_rule,
                                sim_rho_rule, sim_het,
                                sim_theta_opt->count() > 0 ? std::optional<double>(sim_theta)
                                                           : std::nullopt,
                                sim_seed, sim_out, sim_params_out, config);
        if (*est) return cmd_estimate(est_c, est_pair, est_seed, config);
        if (*tst) return cmd_test(tst_c, tst_rho0, tst_level, tst_seed, tst_params, config);
        if (*ml) return cmd_mle(ml_c, ml_cfg, ml_lrt, ml_seed, config);
        if (*prs) return cmd_pairs(prs_m, prs_out);
        if (*orc) return cmd_oracle_check(orc_trials, orc_seed, orc_fault);
        if (*exp)
            return cmd_experiment(exp_kind, exp_n, exp_gamma_rule, exp_rho_rule, exp_rho,
                                  exp_gamma, exp_rho_grid, exp_theta_grid, exp_rho0, exp_level,
                                  exp_reps, exp_seed, threads, exp_mle, exp_lrt, exp_out,
                                  config);
        if (*bch) return cmd_bench(bch_grid, bch_degree, bch_seed, bch_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

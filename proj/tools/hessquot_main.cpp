// hessquot: command-line front end for the Hessian-quotient concavity
// toolkit. Every subcommand prints one JSON report to stdout and uses the
// exit-code contract 0 = pass, 1 = violation/failed check, 2 = usage error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hessquot/campaigns.hpp"
#include "hessquot/concavity.hpp"
#include "hessquot/grid/fields.hpp"
#include "hessquot/jacobi_harness.hpp"
#include "hessquot/kernels/residual_kernels.hpp"

namespace {

using nlohmann::json;
using namespace hessquot;

constexpr const char* kToolVersion = "1.0.0";

std::uint64_t env_seed_default() {
    if (const char* s = std::getenv("HESSQUOT_SEED")) {
        return std::strtoull(s, nullptr, 10);
    }
    return 1;
}

std::string iso8601_now() {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Non-finite reals have no JSON representation; they become null.
json j_real(double v) { return std::isfinite(v) ? json(v) : json(); }

json base_report(const std::string& command, bool no_timestamp) {
    json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    if (!no_timestamp) j["timestamp"] = iso8601_now();
    return j;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

json witness_json(const WitnessSample& w) {
    json j;
    j["index"] = w.index;
    j["lambda"] = w.lambda;
    j["xi_packed_upper"] = w.xi_packed;
    return j;
}

struct SamplingOpts {
    int n = 3;
    int k = 1;
    long long samples = 100000;
    std::uint64_t seed = env_seed_default();
    double cond_max = 1e4;
    bool adversarial = true;
    int workers = 1;
    bool no_timestamp = false;
};

void add_sampling_options(CLI::App* sub, SamplingOpts* o) {
    sub->add_option("--n", o->n, "matrix dimension")->check(CLI::Range(2, kernels::kMaxN));
    sub->add_option("--k", o->k, "quotient order of F = sigma_n/sigma_{n-k}")
        ->check(CLI::Range(1, kernels::kMaxN));
    sub->add_option("--samples", o->samples, "number of random samples")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o->seed, "rng seed (HESSQUOT_SEED env is the fallback)");
    sub->add_option("--cond-max", o->cond_max, "eigenvalue condition-number cap")
        ->check(CLI::Range(1.0, 1e300));
    sub->add_flag("--adversarial,!--no-adversarial", o->adversarial,
                  "cycle adversarial xi families (default on)");
    sub->add_option("--workers", o->workers, "deterministic worker count")
        ->check(CLI::Range(1, 4096));
    sub->add_flag("--no-timestamp", o->no_timestamp, "omit the timestamp field from the JSON");
}

SamplerConfig to_config(const SamplingOpts& o) {
    SamplerConfig cfg;
    cfg.n = o.n;
    cfg.k = o.k;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.cond_max = o.cond_max;
    cfg.adversarial = o.adversarial;
    cfg.workers = o.workers;
    return cfg;
}

json sampling_params(const SamplingOpts& o) {
    json p;
    p["n"] = o.n;
    p["k"] = o.k;
    p["samples"] = o.samples;
    p["seed"] = o.seed;
    p["cond_max"] = o.cond_max;
    p["adversarial"] = o.adversarial;
    p["workers"] = o.workers;
    return p;
}

// ---------------------------------------------------------------- verify --

struct VerifyOpts {
    SamplingOpts c;
    double delta_tilde = 1.0;
    double eps0 = 0.0;
    double tol = kTheoremTol;
};

int run_verify(const VerifyOpts& o) {
    if (o.c.k == o.c.n) {
        std::cerr << "verify: k = n is outside the strengthened bound (it is false there by an "
                     "exact identity); run `counterexample --n "
                  << o.c.n << "` instead\n";
        return 2;
    }
    if (o.c.k > o.c.n) {
        std::cerr << "verify: k must satisfy 1 <= k <= n-1\n";
        return 2;
    }
    if (!(o.delta_tilde > 0.0 && o.delta_tilde <= 1.0)) {
        std::cerr << "verify: --delta-tilde must lie in (0, 1]\n";
        return 2;
    }
    if (!(o.eps0 >= 0.0)) {
        std::cerr << "verify: --eps0 must be >= 0\n";
        return 2;
    }

    const SamplerConfig cfg = to_config(o.c);
    const TheoremSamples s = run_theorem_sampling(cfg);
    const VerifyOutcome out = evaluate_theorem_outcome(s, o.delta_tilde, o.eps0, o.tol);

    json rep = base_report("verify", o.c.no_timestamp);
    rep["params"] = sampling_params(o.c);
    rep["params"]["delta_tilde"] = o.delta_tilde;
    rep["params"]["eps0"] = o.eps0;
    rep["params"]["tol"] = o.tol;

    json sum;
    sum["samples"] = out.samples;
    sum["violations"] = out.violations;
    sum["unconstrained_samples"] = out.unconstrained;
    sum["min_norm_residual"] = out.min_norm_residual;
    sum["argmin"] = out.argmin;
    sum["eps_estimate"] = j_real(out.eps_estimate);
    sum["min_f1_gap"] = out.min_f1_gap;
    sum["min_sigma_ratio"] = out.min_sigma_ratio;
    sum["min_j1_minus_j2"] = out.min_j1_minus_j2;
    sum["pass"] = out.pass;
    rep["summary"] = sum;

    if (!out.pass && out.argmin >= 0) {
        rep["witness"] = witness_json(make_witness(cfg, out.argmin));
    }
    emit(rep);
    return out.pass ? 0 : 1;
}

// ---------------------------------------------------------- estimate-eps --

struct EstimateOpts {
    SamplingOpts c;
    double delta_tilde = 1.0;
};

int run_estimate(const EstimateOpts& o) {
    if (o.c.k > o.c.n) {
        std::cerr << "estimate-eps: k must satisfy 1 <= k <= n\n";
        return 2;
    }
    if (!(o.delta_tilde > 0.0 && o.delta_tilde <= 1.0)) {
        std::cerr << "estimate-eps: --delta-tilde must lie in (0, 1]\n";
        return 2;
    }

    const SamplerConfig cfg = to_config(o.c);
    const TheoremSamples s = run_theorem_sampling(cfg);
    const EpsilonEstimate est = epsilon_from_samples(s, cfg, o.delta_tilde);

    json rep = base_report("estimate-eps", o.c.no_timestamp);
    rep["params"] = sampling_params(o.c);
    rep["params"]["delta_tilde"] = o.delta_tilde;

    json sum;
    sum["epsilon_estimate"] = j_real(est.estimate);
    sum["unconstrained"] = est.unconstrained;
    sum["samples"] = est.samples;
    sum["unconstrained_samples"] = est.unconstrained_samples;
    sum["residual_at_zero"] = {{"min_norm_residual", est.outcome.min_norm_residual},
                               {"violations", est.outcome.violations}};
    if (o.c.k < o.c.n) {
        const CprimeEstimate cp = estimate_c_prime(s, o.delta_tilde);
        sum["proof_constants"] = {{"c_prime_raw", j_real(cp.c_prime_raw)},
                                  {"delta0", cp.delta0},
                                  {"c_prime", j_real(cp.c_prime)},
                                  {"eps_proof", cp.eps_proof},
                                  {"case2_samples", cp.case2_samples}};
    }
    rep["summary"] = sum;
    if (est.witness.index >= 0) rep["witness"] = witness_json(est.witness);
    emit(rep);
    return 0;
}

// -------------------------------------------------------- counterexample --

struct CounterexampleOpts {
    int n = 3;
    std::uint64_t seed = env_seed_default();
    double eps0 = 0.01;
    bool no_timestamp = false;
};

int run_counterexample(const CounterexampleOpts& o) {
    if (!(o.eps0 >= 0.0)) {
        std::cerr << "counterexample: --eps0 must be >= 0\n";
        return 2;
    }
    const double defect = monge_ampere_counterexample(o.n, o.seed);
    std::vector<double> lambda(static_cast<std::size_t>(o.n));
    for (int i = 0; i < o.n; ++i) lambda[static_cast<std::size_t>(i)] = o.n - i;
    const double margin = counterexample_violation_margin(lambda, o.eps0);

    constexpr double kTol = 1e-12;
    const bool pass = defect <= kTol && (o.eps0 > 0.0 ? margin < 0.0 : true);

    json rep = base_report("counterexample", o.no_timestamp);
    rep["params"] = {{"n", o.n}, {"seed", o.seed}, {"eps0", o.eps0}};
    json sum;
    sum["identity_defect"] = defect;
    sum["tol"] = kTol;
    sum["lambda"] = lambda;
    sum["margin_at_eps0"] = margin;
    sum["pass"] = pass;
    rep["summary"] = sum;
    emit(rep);
    return pass ? 0 : 1;
}

// ------------------------------------------------------------ identities --

struct IdentitiesOpts {
    int n_lo = 2;
    int n_hi = 6;
    long long samples = 500;
    std::uint64_t seed = env_seed_default();
    bool no_timestamp = false;
};

int run_identities(const IdentitiesOpts& o) {
    const IdentityReport report = run_identity_suite(o.n_lo, o.n_hi, o.samples, o.seed);

    json rep = base_report("identities", o.no_timestamp);
    rep["params"] = {
        {"n_lo", o.n_lo}, {"n_hi", o.n_hi}, {"samples", o.samples}, {"seed", o.seed}};
    json cases = json::array();
    for (const auto& c : report.cases) {
        cases.push_back({{"n", c.n},
                         {"k", c.k},
                         {"samples", c.samples},
                         {"worst_quadform", c.worst_quadform},
                         {"worst_diag_identity", c.worst_diag_identity},
                         {"worst_offdiag_rewrite", c.worst_offdiag_rewrite},
                         {"min_glz_norm", c.min_glz_norm},
                         {"min_f1_gap", c.min_f1_gap},
                         {"min_j_decomp", c.min_j_decomp},
                         {"min_j1k1", c.min_j1k1},
                         {"min_j1_minus_j2", c.min_j1_minus_j2},
                         {"min_sigma_ratio", c.min_sigma_ratio},
                         {"pass", c.pass}});
    }
    rep["summary"] = {{"cases", cases}, {"pass", report.pass}};
    emit(rep);
    return report.pass ? 0 : 1;
}

// -------------------------------------------------------------- oc-check --

struct OcOpts {
    int n = 3;
    int k = 2;
    int l = 0;
    long long samples = 1000;
    std::uint64_t seed = env_seed_default();
    double tol = 1e-4;
    bool no_timestamp = false;
};

int run_oc(const OcOpts& o) {
    if (!(0 <= o.l && o.l < o.k && o.k <= o.n)) {
        std::cerr << "oc-check: need 0 <= l < k <= n\n";
        return 2;
    }
    Rng rng(derive_stream_seed(o.seed, 0));
    double min_norm = std::numeric_limits<double>::infinity();
    long long violations = 0;
    long long argmin = -1;
    std::vector<double> worst_w, worst_xi;
    for (long long i = 0; i < o.samples; ++i) {
        const SymMatrix w = random_gamma_k_matrix(rng, o.n, o.k);
        const SymMatrix xi = random_sym_matrix(rng, o.n);
        const ClassicalConcavityResult res = classical_concavity_residual(w, o.k, o.l, xi);
        const double rn = res.scale > 0.0 ? res.residual / res.scale : 0.0;
        if (rn < min_norm) {
            min_norm = rn;
            argmin = i;
            worst_w = w.upper();
            worst_xi = xi.upper();
        }
        if (rn < -o.tol) ++violations;
    }
    const bool pass = violations == 0;

    json rep = base_report("oc-check", o.no_timestamp);
    rep["params"] = {{"n", o.n},   {"k", o.k},       {"l", o.l},
                     {"samples", o.samples}, {"seed", o.seed}, {"tol", o.tol}};
    rep["summary"] = {{"samples", o.samples},
                      {"violations", violations},
                      {"min_norm_residual", j_real(min_norm)},
                      {"argmin", argmin},
                      {"pass", pass}};
    if (!pass) {
        rep["witness"] = {
            {"index", argmin}, {"w_packed_upper", worst_w}, {"xi_packed_upper", worst_xi}};
    }
    emit(rep);
    return pass ? 0 : 1;
}

// ------------------------------------------------------------- glz-check --

int run_glz(const SamplingOpts& o) {
    if (o.k > o.n) {
        std::cerr << "glz-check: k must satisfy 1 <= k <= n\n";
        return 2;
    }
    const SamplerConfig cfg = to_config(o);
    const GlzOutcome out = run_glz_campaign(cfg);

    json rep = base_report("glz-check", o.no_timestamp);
    rep["params"] = sampling_params(o);
    rep["params"]["tol"] = out.tol;
    rep["summary"] = {{"samples", out.samples},
                      {"violations", out.violations},
                      {"min_norm_residual", out.min_norm_residual},
                      {"argmin", out.argmin},
                      {"pass", out.pass}};
    if (!out.pass && out.argmin >= 0) {
        rep["witness"] = witness_json(make_witness(cfg, out.argmin));
    }
    emit(rep);
    return out.pass ? 0 : 1;
}

// ---------------------------------------------------------------- jacobi --

struct JacobiOpts {
    std::string field = "cosine:a=0.3";
    int dim = 2;
    int points = 48;
    int k = 1;
    double eps = 0.1;
    double c = 0.0;
    bool solve_c = false;
    bool c_given = false;
    double gap_min = 1e-3;
    std::string out_csv;
    bool no_timestamp = false;
};

bool ends_with_csv(const std::string& s) {
    return s.size() >= 4 && s.compare(s.size() - 4, 4, ".csv") == 0;
}

int run_jacobi(const JacobiOpts& o) {
    if (o.solve_c == o.c_given) {
        std::cerr << "jacobi: pass exactly one of --c <value> or --solve-c\n";
        return 2;
    }
    grid::SymTensorField w;
    std::string source;
    if (ends_with_csv(o.field)) {
        w = grid::read_tensor_csv(o.field);
        source = "csv";
    } else {
        w = grid::build_family_field(grid::parse_field_spec(o.field), o.dim, o.points);
        source = "family";
    }
    if (o.k < 1 || o.k > w.shape.dim) {
        std::cerr << "jacobi: k must satisfy 1 <= k <= dim\n";
        return 2;
    }

    const double defect = codazzi_defect(w);
    const JacobiFieldResult res = jacobi_point_reports(w, o.k, o.gap_min);

    json rep = base_report("jacobi", o.no_timestamp);
    rep["params"] = {{"field", o.field},     {"source", source}, {"dim", w.shape.dim},
                     {"points", w.shape.n[0]}, {"k", o.k},       {"eps", o.eps},
                     {"gap_min", o.gap_min}};
    if (o.c_given) rep["params"]["c"] = o.c;
    rep["params"]["solve_c"] = o.solve_c;

    json sum;
    sum["spacing"] = w.shape.h[0];
    sum["codazzi_defect"] = defect;
    sum["total_points"] = res.total_points;
    sum["checked_points"] = static_cast<long long>(res.reports.size());
    sum["excluded_points"] = res.excluded_points;

    int rc = 0;
    double c_used = o.c;
    if (o.solve_c) {
        if (res.reports.empty()) {
            sum["c_min"] = nullptr;
        } else {
            c_used = min_constant_C(res, o.eps);
            sum["c_min"] = c_used;
        }
        sum["pass"] = true;
    } else {
        long long violations = 0;
        double min_residual = std::numeric_limits<double>::infinity();
        json argmin_point;
        for (const auto& r : res.reports) {
            const double v = r.residual_at(o.eps, o.c);
            if (v < min_residual) {
                min_residual = v;
                argmin_point = json::array({r.ix, r.iy});
                if (w.shape.dim == 3) argmin_point.push_back(r.iz);
            }
            if (v < 0.0) ++violations;
        }
        sum["min_residual"] =
            res.reports.empty() ? json() : json(min_residual);
        sum["argmin_point"] = argmin_point;
        sum["violations"] = violations;
        sum["pass"] = violations == 0;
        rc = violations == 0 ? 0 : 1;
    }
    rep["summary"] = sum;

    if (!o.out_csv.empty()) {
        std::ofstream f(o.out_csv);
        if (!f) {
            std::cerr << "jacobi: cannot open --out path " << o.out_csv << "\n";
            return 2;
        }
        f.precision(17);
        f << "ix,iy" << (w.shape.dim == 3 ? ",iz" : "")
          << ",lambda1,gap,b,diffusion,grad_contraction,trace_f,grad_f_term,hess_f_term,"
             "residual\n";
        for (const auto& r : res.reports) {
            f << r.ix << "," << r.iy;
            if (w.shape.dim == 3) f << "," << r.iz;
            f << "," << r.lambda1 << "," << r.gap << "," << r.b << "," << r.diffusion << ","
              << r.grad_contraction << "," << r.trace_f << "," << r.grad_f_term << ","
              << r.hess_f_term << "," << r.residual_at(o.eps, c_used) << "\n";
        }
    }
    emit(rep);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hessian-quotient concavity verification toolkit"};
    app.require_subcommand(1);

    VerifyOpts vo;
    CLI::App* verify = app.add_subcommand(
        "verify", "sample the strengthened concavity residual and report violations");
    add_sampling_options(verify, &vo.c);
    verify->add_option("--delta-tilde", vo.delta_tilde, "diagonal damping parameter in (0,1]");
    verify->add_option("--eps0", vo.eps0, "top-entry strengthening to verify");
    verify->add_option("--tol", vo.tol, "violation threshold on residual/scale");

    EstimateOpts eo;
    CLI::App* estimate = app.add_subcommand(
        "estimate-eps", "estimate the largest admissible top-entry strengthening");
    add_sampling_options(estimate, &eo.c);
    estimate->add_option("--delta-tilde", eo.delta_tilde, "diagonal damping parameter in (0,1]");

    CounterexampleOpts co;
    CLI::App* cex = app.add_subcommand(
        "counterexample", "reproduce the exact k = n identity that defeats any strengthening");
    cex->add_option("--n", co.n, "matrix dimension")->check(CLI::Range(1, kernels::kMaxN));
    cex->add_option("--seed", co.seed, "rng seed for the probe spectra");
    cex->add_option("--eps0", co.eps0, "strengthening whose violation margin is reported");
    cex->add_flag("--no-timestamp", co.no_timestamp, "omit the timestamp field from the JSON");

    IdentitiesOpts io;
    CLI::App* idents = app.add_subcommand(
        "identities", "run the exact-identity and structural-inequality suite");
    idents->add_option("--n-lo", io.n_lo, "smallest dimension")
        ->check(CLI::Range(1, kernels::kMaxN));
    idents->add_option("--n-hi", io.n_hi, "largest dimension")
        ->check(CLI::Range(1, kernels::kMaxN));
    idents->add_option("--samples", io.samples, "samples per (n,k) case")
        ->check(CLI::PositiveNumber);
    idents->add_option("--seed", io.seed, "rng seed (HESSQUOT_SEED env is the fallback)");
    idents->add_flag("--no-timestamp", io.no_timestamp, "omit the timestamp field from the JSON");

    OcOpts oo;
    CLI::App* oc = app.add_subcommand(
        "oc-check", "finite-difference concavity check of (sigma_k/sigma_l)^{1/(k-l)}");
    oc->add_option("--n", oo.n, "matrix dimension")->check(CLI::Range(2, kernels::kMaxN));
    oc->add_option("--k", oo.k, "numerator degree")->check(CLI::Range(1, kernels::kMaxN));
    oc->add_option("--l", oo.l, "denominator degree")->check(CLI::Range(0, kernels::kMaxN));
    oc->add_option("--samples", oo.samples, "number of random samples")
        ->check(CLI::PositiveNumber);
    oc->add_option("--seed", oo.seed, "rng seed (HESSQUOT_SEED env is the fallback)");
    oc->add_option("--tol", oo.tol, "violation threshold on residual/scale");
    oc->add_flag("--no-timestamp", oo.no_timestamp, "omit the timestamp field from the JSON");

    SamplingOpts go;
    CLI::App* glz = app.add_subcommand(
        "glz-check", "sample the augmented-Hessian lower bound for sigma_k");
    add_sampling_options(glz, &go);

    JacobiOpts jo;
    CLI::App* jac = app.add_subcommand(
        "jacobi", "evaluate the pointwise differential inequality on a periodic grid field");
    jac->add_option("--field", jo.field,
                    "field family spec (constant|cosine|bumps[:k=v,...]) or a .csv path");
    jac->add_option("--n", jo.dim, "grid dimension for family fields")->check(CLI::Range(2, 3));
    jac->add_option("--points", jo.points, "grid points per axis for family fields")
        ->check(CLI::Range(8, 4096));
    jac->add_option("--k", jo.k, "quotient order of F");
    jac->add_option("--eps", jo.eps, "gradient-term coefficient");
    CLI::Option* copt = jac->add_option("--c", jo.c, "forcing constant C");
    jac->add_flag("--solve-c", jo.solve_c, "solve for the least admissible C instead");
    jac->add_option("--gap-min", jo.gap_min,
                    "relative eigenvalue-gap filter: keep points with gap >= gap_min*lambda1")
        ->check(CLI::Range(0.0, 1.0));
    jac->add_option("--out", jo.out_csv, "write per-point reports to this CSV path");
    jac->add_flag("--no-timestamp", jo.no_timestamp, "omit the timestamp field from the JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    jo.c_given = copt->count() > 0;

    try {
        if (app.got_subcommand(verify)) return run_verify(vo);
        if (app.got_subcommand(estimate)) return run_estimate(eo);
        if (app.got_subcommand(cex)) return run_counterexample(co);
        if (app.got_subcommand(idents)) return run_identities(io);
        if (app.got_subcommand(oc)) return run_oc(oo);
        if (app.got_subcommand(glz)) return run_glz(go);
        if (app.got_subcommand(jac)) return run_jacobi(jo);
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}

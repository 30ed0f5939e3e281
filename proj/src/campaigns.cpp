#include "hessquot/campaigns.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "hessquot/concavity.hpp"
#include "hessquot/hessian_quotient.hpp"
#include "hessquot/kernels/residual_kernels.hpp"
#include "hessquot/symfunc.hpp"

namespace hessquot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long long kBlock = 2048;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream + 1));
}

void validate_config(const SamplerConfig& cfg) {
    if (cfg.n < 2 || cfg.n > kernels::kMaxN) {
        throw std::invalid_argument("sampler: n must be in [2, " +
                                    std::to_string(kernels::kMaxN) + "]");
    }
    if (cfg.k < 1 || cfg.k > cfg.n) throw std::invalid_argument("sampler: k out of range");
    if (cfg.samples < 1) throw std::invalid_argument("sampler: samples must be >= 1");
    if (!(cfg.cond_max >= 1.0)) throw std::invalid_argument("sampler: cond_max must be >= 1");
    if (cfg.workers < 1 || cfg.workers > 4096) {
        throw std::invalid_argument("sampler: workers out of range");
    }
}

long long worker_begin(long long total, int workers, int w) {
    return total * static_cast<long long>(w) / static_cast<long long>(workers);
}

SampleStream::SampleStream(const SamplerConfig& cfg, int worker)
    : cfg_(cfg), rng_(derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(worker))) {
    validate_config(cfg);
    if (worker < 0 || worker >= cfg.workers) {
        throw std::invalid_argument("sample stream: worker index out of range");
    }
    base_ = worker_begin(cfg.samples, cfg.workers, worker);
    count_ = worker_begin(cfg.samples, cfg.workers, worker + 1) - base_;
}

void SampleStream::next(double* lambda, double* xi) {
    const int n = cfg_.n;
    const int m = packed_size(n);
    const double hi = std::sqrt(cfg_.cond_max);
    const double lo = 1.0 / hi;
    for (int a = 0; a < n; ++a) lambda[a] = rng_.log_uniform(lo, hi);
    std::sort(lambda, lambda + n, std::greater<>());

    XiFamily family = cfg_.xi_family;
    if (family == XiFamily::mixed) {
        family = cfg_.adversarial ? static_cast<XiFamily>(local_ % 4) : XiFamily::normal;
    }
    switch (family) {
        case XiFamily::normal:
            for (int p = 0; p < m; ++p) xi[p] = rng_.normal();
            break;
        case XiFamily::top_entry:
            std::fill(xi, xi + m, 0.0);
            xi[0] = 1.0;
            break;
        case XiFamily::diag_lambda:
            std::fill(xi, xi + m, 0.0);
            for (int a = 0; a < n; ++a) xi[packed_index(n, a, a)] = lambda[a];
            break;
        case XiFamily::rank_one: {
            double v[kernels::kMaxN];
            for (int a = 0; a < n; ++a) v[a] = rng_.normal();
            for (int a = 0; a < n; ++a) {
                for (int b = a; b < n; ++b) xi[packed_index(n, a, b)] = v[a] * v[b];
            }
            break;
        }
        case XiFamily::top_zero:
            for (int p = 0; p < m; ++p) xi[p] = rng_.normal();
            xi[0] = 0.0;
            break;
        case XiFamily::mixed:
            break; // unreachable
    }
    ++local_;
}

namespace {

// Runs `body(worker)` for every worker, inline when workers == 1. All shared
// writes are to disjoint index ranges, so the result is schedule-independent.
void run_workers(int workers, const std::function<void(int)>& body) {
    if (workers == 1) {
        body(0);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                body(w);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

} // namespace

TheoremSamples run_theorem_sampling(const SamplerConfig& cfg) {
    validate_config(cfg);
    const int n = cfg.n;
    const int m = packed_size(n);
    TheoremSamples s;
    s.count = cfg.samples;
    const auto total = static_cast<std::size_t>(cfg.samples);
    for (auto* col : {&s.r0, &s.a_coeff, &s.eps_den, &s.scale, &s.j1, &s.j2, &s.f1min, &s.srmin,
                      &s.i1, &s.case2max, &s.fval}) {
        col->resize(total);
    }

    run_workers(cfg.workers, [&](int w) {
        SampleStream stream(cfg, w);
        std::vector<double> lam(static_cast<std::size_t>(kBlock) * n);
        std::vector<double> xi(static_cast<std::size_t>(kBlock) * m);
        long long done = 0;
        while (done < stream.count()) {
            const long long b = std::min(kBlock, stream.count() - done);
            for (long long j = 0; j < b; ++j) {
                stream.next(&lam[static_cast<std::size_t>(j) * n],
                            &xi[static_cast<std::size_t>(j) * m]);
            }
            const auto off = static_cast<std::size_t>(stream.base() + done);
            kernels::TheoremOut out;
            out.r0 = s.r0.data() + off;
            out.a_coeff = s.a_coeff.data() + off;
            out.eps_den = s.eps_den.data() + off;
            out.scale = s.scale.data() + off;
            out.j1 = s.j1.data() + off;
            out.j2 = s.j2.data() + off;
            out.f1min = s.f1min.data() + off;
            out.srmin = s.srmin.data() + off;
            out.i1 = s.i1.data() + off;
            out.case2max = s.case2max.data() + off;
            out.fval = s.fval.data() + off;
            kernels::theorem_batch(n, cfg.k, lam.data(), xi.data(), b, out);
            done += b;
        }
    });
    return s;
}

VerifyOutcome evaluate_theorem_outcome(const TheoremSamples& s, double delta_tilde, double eps0,
                                       double tol) {
    if (s.count < 1) throw std::invalid_argument("evaluate_theorem_outcome: no samples");
    VerifyOutcome out;
    out.delta_tilde = delta_tilde;
    out.epsilon0 = eps0;
    out.tol = tol;
    out.samples = s.count;
    out.min_norm_residual = kInf;
    out.eps_estimate = kInf;
    out.min_f1_gap = kInf;
    out.min_sigma_ratio = kInf;
    out.min_j1_minus_j2 = kInf;
    for (long long i = 0; i < s.count; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double e = s.eps_den[u];
        const double base = s.r0[u] + delta_tilde * s.a_coeff[u];
        const double r = base - eps0 * e;
        const double sc = s.scale[u];
        const double rn = sc > 0.0 ? r / sc : 0.0;
        if (rn < out.min_norm_residual) {
            out.min_norm_residual = rn;
            out.argmin = i;
        }
        if (rn < -tol) ++out.violations;
        if (e == 0.0) {
            ++out.unconstrained;
        } else {
            const double h = base / e;
            if (h < out.eps_estimate) {
                out.eps_estimate = h;
                out.eps_argmin = i;
            }
        }
        out.min_f1_gap = std::min(out.min_f1_gap, s.f1min[u]);
        out.min_sigma_ratio = std::min(out.min_sigma_ratio, s.srmin[u]);
        const double jd = s.j1[u] + s.j2[u];
        out.min_j1_minus_j2 =
            std::min(out.min_j1_minus_j2, jd > 0.0 ? (s.j1[u] - s.j2[u]) / jd : 0.0);
    }
    out.pass = out.violations == 0;
    return out;
}

WitnessSample make_witness(const SamplerConfig& cfg, long long index) {
    validate_config(cfg);
    if (index < 0 || index >= cfg.samples) {
        throw std::invalid_argument("make_witness: index out of range");
    }
    int w = 0;
    while (worker_begin(cfg.samples, cfg.workers, w + 1) <= index) ++w;
    SampleStream stream(cfg, w);
    WitnessSample out;
    out.index = index;
    out.lambda.resize(static_cast<std::size_t>(cfg.n));
    out.xi_packed.resize(static_cast<std::size_t>(packed_size(cfg.n)));
    for (long long j = stream.base(); j <= index; ++j) {
        stream.next(out.lambda.data(), out.xi_packed.data());
    }
    return out;
}

CprimeEstimate estimate_c_prime(const TheoremSamples& s, double delta_tilde) {
    if (s.count < 1) throw std::invalid_argument("estimate_c_prime: no samples");
    CprimeEstimate out;

    auto pass_min = [&](double delta0, double case_cap, long long* matched) {
        double best = kInf;
        const double damp = (1.0 - delta0) * (1.0 - delta0);
        long long hits = 0;
        for (long long i = 0; i < s.count; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const double e = s.eps_den[u];
            if (!(e > 0.0)) continue;
            const double c2 = s.case2max[u];
            if (!(c2 <= case_cap)) continue; // NaN compares false: skipped
            ++hits;
            const double f = s.fval[u];
            best = std::min(best, s.i1[u] * f * f / (e * damp));
        }
        if (matched != nullptr) *matched = hits;
        return best;
    };

    long long raw_hits = 0;
    out.c_prime_raw = pass_min(0.0, 1e-12, &raw_hits);
    if (raw_hits == 0) out.c_prime_raw = pass_min(0.0, kInf, &raw_hits);
    if (!std::isfinite(out.c_prime_raw)) return out; // every sample unconstrained

    const BalanceParams bal = balance_params(delta_tilde, out.c_prime_raw);
    out.delta0 = bal.delta0;
    out.c_prime = pass_min(out.delta0, out.delta0, &out.case2_samples);
    if (!std::isfinite(out.c_prime)) out.c_prime = out.c_prime_raw;
    out.eps_proof = std::sqrt(delta_tilde) * out.delta0;
    return out;
}

EpsilonEstimate epsilon_from_samples(const TheoremSamples& s, const SamplerConfig& cfg,
                                     double delta_tilde) {
    EpsilonEstimate out;
    out.outcome = evaluate_theorem_outcome(s, delta_tilde, 0.0);
    out.samples = s.count;
    out.unconstrained_samples = out.outcome.unconstrained;
    out.estimate = out.outcome.eps_estimate;
    out.unconstrained = out.outcome.eps_argmin < 0;
    if (!out.unconstrained) out.witness = make_witness(cfg, out.outcome.eps_argmin);
    return out;
}

EpsilonEstimate estimate_epsilon0(const SamplerConfig& cfg, double delta_tilde) {
    const TheoremSamples s = run_theorem_sampling(cfg);
    return epsilon_from_samples(s, cfg, delta_tilde);
}

GlzOutcome run_glz_campaign(const SamplerConfig& cfg) {
    validate_config(cfg);
    const int n = cfg.n;
    const int m = packed_size(n);
    std::vector<double> residual(static_cast<std::size_t>(cfg.samples));
    std::vector<double> scale(static_cast<std::size_t>(cfg.samples));

    run_workers(cfg.workers, [&](int w) {
        SampleStream stream(cfg, w);
        std::vector<double> lam(static_cast<std::size_t>(kBlock) * n);
        std::vector<double> xi(static_cast<std::size_t>(kBlock) * m);
        long long done = 0;
        while (done < stream.count()) {
            const long long b = std::min(kBlock, stream.count() - done);
            for (long long j = 0; j < b; ++j) {
                stream.next(&lam[static_cast<std::size_t>(j) * n],
                            &xi[static_cast<std::size_t>(j) * m]);
            }
            const auto off = static_cast<std::size_t>(stream.base() + done);
            kernels::glz_batch(n, cfg.k, lam.data(), xi.data(), b, residual.data() + off,
                               scale.data() + off);
            done += b;
        }
    });

    GlzOutcome out;
    out.samples = cfg.samples;
    out.min_norm_residual = kInf;
    for (long long i = 0; i < cfg.samples; ++i) {
        const auto u = static_cast<std::size_t>(i);
        const double rn = scale[u] > 0.0 ? residual[u] / scale[u] : 0.0;
        if (rn < out.min_norm_residual) {
            out.min_norm_residual = rn;
            out.argmin = i;
        }
        if (rn < -out.tol) ++out.violations;
    }
    out.pass = out.violations == 0;
    return out;
}

namespace {

// Error divided by its allowance; > 1 means the comparison fails.
double strain(double a, double b, double tol_rel, double gross) {
    const double allow = tol_rel * std::max(std::abs(a), std::abs(b)) +
                         64.0 * std::numeric_limits<double>::epsilon() * gross;
    const double err = std::abs(a - b);
    if (err == 0.0) return 0.0;
    return allow > 0.0 ? err / allow : kInf;
}

} // namespace

IdentityReport run_identity_suite(int n_lo, int n_hi, long long samples_per_case,
                                  std::uint64_t seed) {
    if (n_lo < 1 || n_hi < n_lo || n_hi > kernels::kMaxN) {
        throw std::invalid_argument("identity suite: bad n range");
    }
    if (samples_per_case < 1) throw std::invalid_argument("identity suite: samples must be >= 1");

    // Test-only mutation hook: deliberately corrupts one comparison so the
    // suite's failure path can be exercised end to end.
    const char* mutate = std::getenv("HESSQUOT_TEST_MUTATE");
    const bool flip_offdiag = mutate != nullptr && std::strcmp(mutate, "offdiag_sign") == 0;

    IdentityReport report;
    if (n_lo == 1) {
        // n = 1 is degenerate: F = lambda_1 is linear, so every quadratic-form
        // identity reduces to 0 = 0 and the structural minima are empty sums.
        IdentityCase trivial;
        trivial.n = 1;
        trivial.k = 1;
        trivial.samples = 0;
        trivial.pass = true;
        report.cases.push_back(trivial);
        n_lo = 2;
        if (n_hi < 2) return report;
    }
    for (int n = n_lo; n <= n_hi; ++n) {
        for (int k = 1; k <= n; ++k) {
            SamplerConfig cfg;
            cfg.n = n;
            cfg.k = k;
            cfg.samples = samples_per_case;
            cfg.seed = derive_stream_seed(seed, (static_cast<std::uint64_t>(n) << 8) |
                                                    static_cast<std::uint64_t>(k));
            cfg.workers = 1;
            SampleStream stream(cfg, 0);

            IdentityCase c;
            c.n = n;
            c.k = k;
            c.samples = samples_per_case;
            c.min_glz_norm = kInf;
            c.min_f1_gap = kInf;
            c.min_j_decomp = kInf;
            c.min_j1k1 = kInf;
            c.min_j1_minus_j2 = kInf;
            c.min_sigma_ratio = kInf;

            std::vector<double> lam(static_cast<std::size_t>(n));
            std::vector<double> xip(static_cast<std::size_t>(packed_size(n)));
            const double ratio = static_cast<double>(n - k) / static_cast<double>(n - 1);
            for (long long it = 0; it < samples_per_case; ++it) {
                stream.next(lam.data(), xip.data());
                const EigenSpectrum spec = spectrum_from_lambda(lam);
                SymMatrix xi(n);
                for (int a = 0; a < n; ++a) {
                    for (int b = a; b < n; ++b) {
                        xi.set(a, b, xip[static_cast<std::size_t>(packed_index(n, a, b))]);
                    }
                }

                const QuadFormBreakdown bd = F_quadform(spec, k, xi);
                const double s2 = bd.sigma_k * bd.sigma_k;
                c.worst_quadform =
                    std::max(c.worst_quadform, strain(bd.total_quadform_direct, bd.total_quadform,
                                                      1e-9, bd.roundoff_scale));
                const double i3_other = flip_offdiag ? -bd.i3_definitional : bd.i3_definitional;
                c.worst_offdiag_rewrite = std::max(
                    c.worst_offdiag_rewrite, strain(bd.i3, i3_other, 1e-10, bd.roundoff_scale * s2));

                std::vector<double> xd(static_cast<std::size_t>(n));
                for (int a = 0; a < n; ++a) xd[static_cast<std::size_t>(a)] = xi.at(a, a);
                const auto [left, right] = diag_identity_sides(spec, k, xd);
                c.worst_diag_identity = std::max(
                    c.worst_diag_identity, strain(left, right, 1e-10, bd.roundoff_scale * s2));

                const GlzResult g = glz_residual(spec, k, xi);
                c.min_glz_norm =
                    std::min(c.min_glz_norm, g.scale > 0.0 ? g.residual / g.scale : 0.0);

                // Structural inequalities straight from the table.
                const SigmaTable t(spec.kappa);
                const double f11 = t.sigma1(k - 1, 0) * spec.kappa[0] * spec.kappa[0] / s2;
                for (int a = 1; a < n; ++a) {
                    const double ka = spec.kappa[static_cast<std::size_t>(a)];
                    const double fa = t.sigma1(k - 1, a) * ka * ka / s2;
                    c.min_f1_gap = std::min(
                        c.min_f1_gap,
                        (fa * spec.lambda[static_cast<std::size_t>(a)] / spec.lambda[0] - f11) /
                            f11);
                    const double s1a = t.sigma1(k - 1, a);
                    c.min_sigma_ratio = std::min(
                        c.min_sigma_ratio, (t.sigma2(k - 1, a, 0) - ratio * s1a) / s1a);
                }

                const double jsum = bd.j1 + bd.j2 + bd.j3 + bd.k1;
                const double lhs3 = bd.i3 / s2;
                const double dden = lhs3 + jsum;
                c.min_j_decomp =
                    std::min(c.min_j_decomp, dden > 0.0 ? (lhs3 - jsum) / dden : 0.0);
                const double kden = bd.k1 + ratio * bd.j1;
                c.min_j1k1 =
                    std::min(c.min_j1k1, kden > 0.0 ? (bd.k1 - ratio * bd.j1) / kden : 0.0);
                const double jden = bd.j1 + bd.j2;
                c.min_j1_minus_j2 =
                    std::min(c.min_j1_minus_j2, jden > 0.0 ? (bd.j1 - bd.j2) / jden : 0.0);
            }

            c.pass = c.worst_quadform <= 1.0 && c.worst_diag_identity <= 1.0 &&
                     c.worst_offdiag_rewrite <= 1.0 && c.min_glz_norm >= -kGlzTol &&
                     c.min_f1_gap >= -1e-12 && c.min_j_decomp >= -1e-12 &&
                     c.min_j1k1 >= -1e-12 && c.min_j1_minus_j2 >= -1e-12 &&
                     c.min_sigma_ratio >= -1e-12;
            report.pass = report.pass && c.pass;
            report.cases.push_back(c);
        }
    }
    return report;
}

SymMatrix random_sym_matrix(Rng& rng, int n) {
    SymMatrix m(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) m.set(a, b, rng.normal());
    }
    return m;
}

SymMatrix random_pd_matrix(Rng& rng, int n, double cond_max) {
    const double hi = std::sqrt(cond_max);
    const double lo = 1.0 / hi;
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (auto& l : lam) l = rng.log_uniform(lo, hi);
    std::sort(lam.begin(), lam.end(), std::greater<>());

    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0); // rows of Q
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double th = rng.uniform01() * 6.283185307179586476925286766559;
            const double cc = std::cos(th), ss = std::sin(th);
            for (int col = 0; col < n; ++col) {
                const double qi = q[static_cast<std::size_t>(i) * n + col];
                const double qj = q[static_cast<std::size_t>(j) * n + col];
                q[static_cast<std::size_t>(i) * n + col] = cc * qi - ss * qj;
                q[static_cast<std::size_t>(j) * n + col] = ss * qi + cc * qj;
            }
        }
    }
    SymMatrix w(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) {
                acc += q[static_cast<std::size_t>(t) * n + a] * lam[static_cast<std::size_t>(t)] *
                       q[static_cast<std::size_t>(t) * n + b];
            }
            w.set(a, b, acc);
        }
    }
    return w;
}

SymMatrix random_gamma_k_matrix(Rng& rng, int n, int k) {
    if (n < 1 || k < 1 || k > n) {
        throw std::invalid_argument("random_gamma_k_matrix: need 1 <= k <= n");
    }
    const SymMatrix g = random_sym_matrix(rng, n);
    const EigenSpectrum es = eigh_desc(g);
    const double spread = es.lambda[0] - es.lambda[static_cast<std::size_t>(n - 1)] + 1.0;
    double lo = -es.lambda[0] - spread; // sigma_1 < 0: outside the cone
    double hi = -es.lambda[static_cast<std::size_t>(n - 1)] + spread; // positive: inside
    std::vector<double> shifted(static_cast<std::size_t>(n));
    const auto inside = [&](double t) {
        for (int i = 0; i < n; ++i) {
            shifted[static_cast<std::size_t>(i)] = es.lambda[static_cast<std::size_t>(i)] + t;
        }
        return in_gamma_cone(shifted, k);
    };
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    const double margin = spread * (0.05 + 0.95 * rng.uniform01());
    SymMatrix w = g;
    for (int i = 0; i < n; ++i) w.set(i, i, g.at(i, i) + hi + margin);
    return w;
}

} // namespace hessquot

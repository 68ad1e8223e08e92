// Acceptance gate: numbered end-to-end criteria for the approximation
// pipeline, each printing one PASS/FAIL verdict line. Run a single criterion
// with --criterion N (what the ctest entries do) or everything by default.
// Exit status is nonzero when any requested criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "reference_bounds.hpp"
#include "rvfl/bounds.hpp"
#include "rvfl/checks.hpp"
#include "rvfl/geometry.hpp"
#include "rvfl/kernel.hpp"
#include "rvfl/lipschitz.hpp"
#include "rvfl/network.hpp"
#include "rvfl/parallel.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/specfun.hpp"
#include "rvfl/spectral.hpp"
#include "rvfl/targets.hpp"
#include "test_support.hpp"

namespace {

using namespace rvfl;
using testsup::kPi;

// ---------------------------------------------------------------------------
// shared fixtures

// Kernel tables are the expensive per-dimension setup; build each once even
// when a criterion sweeps many (lambda, theta, target) configurations.
std::shared_ptr<const SmoothingKernel> cached_kernel(int m) {
    static std::map<int, std::shared_ptr<const SmoothingKernel>> cache;
    auto it = cache.find(m);
    if (it == cache.end())
        it = cache.emplace(m, std::make_shared<const SmoothingKernel>(m)).first;
    return it->second;
}

std::shared_ptr<const McShaneExtension> cached_extension(const std::string& name, int m) {
    static std::map<std::string, std::shared_ptr<const McShaneExtension>> cache;
    const std::string key = name + "/" + std::to_string(m);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Target t = make_builtin_target(name, m, default_resolution(m));
        it = cache
                 .emplace(key, std::make_shared<const McShaneExtension>(
                                   recenter(t.domain, t.values, t.ell)))
                 .first;
    }
    return it->second;
}

std::shared_ptr<const SpectralSurrogate> make_surrogate(
    std::shared_ptr<const McShaneExtension> ext, double lambda, double theta) {
    SpectralSurrogate::Options opts;
    if (ext->dim() >= 2) opts.fourier_tol_rel = 1e-4;
    auto kernel = cached_kernel(ext->dim());
    return std::make_shared<const SpectralSurrogate>(std::move(ext), std::move(kernel),
                                                     lambda, theta, opts);
}

struct MiniPipeline {
    std::shared_ptr<const McShaneExtension> ext;
    std::shared_ptr<const SpectralSurrogate> surrogate;
    double ktilde_volume = 0.0;
};

MiniPipeline mini_pipeline(const std::string& name, int m, double lambda, double theta,
                           std::uint64_t volume_seed) {
    MiniPipeline p;
    p.ext = cached_extension(name, m);
    p.surrogate = make_surrogate(p.ext, lambda, theta);
    const double reach = p.ext->sup_abs() / p.ext->lipschitz();
    p.ktilde_volume =
        minkowski_ball_volume(p.ext->base().domain.points(), reach, 200000, volume_seed)
            .value;
    return p;
}

// Eleven evaluation points spanning 80% of the support box, as everywhere
// else in the validation tooling.
std::vector<Eigen::VectorXd> probe_points(const Extension& ext) {
    const auto [lo, hi] = ext.support_box();
    std::vector<Eigen::VectorXd> pts;
    for (int i = 0; i < 11; ++i)
        pts.push_back((0.8 * (lo + (hi - lo) * (static_cast<double>(i) / 10.0))).eval());
    return pts;
}

std::string point_str(const Eigen::VectorXd& x) {
    std::string s = "(";
    char buf[32];
    for (int d = 0; d < x.size(); ++d) {
        std::snprintf(buf, sizeof buf, "%s%.3f", d ? ", " : "", x[d]);
        s += buf;
    }
    return s + ")";
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_variance(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

// ---------------------------------------------------------------------------
// criterion 1: special-function inequalities

bool criterion_1() {
    bool ok = true;

    const double z_neg = specfun::first_bessel_zero(-0.5);
    const double z_pos = specfun::first_bessel_zero(0.5);
    const double e1 = std::abs(z_neg - kPi / 2.0);
    const double e2 = std::abs(z_pos - kPi);
    std::printf("    half-order zeros: |j(-1/2) - pi/2| = %.3g, |j(1/2) - pi| = %.3g"
                " (tolerance 1e-10)\n",
                e1, e2);
    if (e1 > 1e-10 || e2 > 1e-10) ok = false;

    // j_nu < nu - a (nu/2)^{1/3} + (3/20) a^2 (nu/2)^{-1/3}, a < 0 the first
    // Airy zero, for nu = m/2 - 1 over m = 3..30.
    const double a = specfun::kAiryA;
    double worst_slack = 1e300;
    int worst_m = 0;
    for (int m = 3; m <= 30; ++m) {
        const double nu = m / 2.0 - 1.0;
        const double cap = nu - a * std::cbrt(nu / 2.0) +
                           (3.0 / 20.0) * a * a / std::cbrt(nu / 2.0);
        const double z = specfun::first_bessel_zero(nu);
        const double slack = cap - z;
        if (slack < worst_slack) {
            worst_slack = slack;
            worst_m = m;
        }
        if (!(z < cap)) {
            std::printf("    zero upper bound VIOLATED at m = %d: j = %.12g, cap = %.12g\n",
                        m, z, cap);
            ok = false;
        }
    }
    std::printf("    zero upper bound holds for m = 3..30; smallest slack %.4g at m = %d\n",
                worst_slack, worst_m);

    double worst_gamma = -1e300;
    for (double ga : {0.5, 1.0, 1.5, 2.5, 5.0, 10.0, 20.0})
        for (double x : {0.05, 0.3, 1.0, 2.0, 5.0, 10.0, 40.0}) {
            const double p = specfun::regularized_lower_gamma(ga, x);
            const double cap =
                std::exp(ga * std::log(x) - std::log(ga) - std::lgamma(ga));
            const double excess = p - cap;
            worst_gamma = std::max(worst_gamma, excess);
            if (excess > 1e-12 * (1.0 + cap)) {
                std::printf("    gamma tail bound VIOLATED at a = %g, x = %g: "
                            "P = %.12g > %.12g\n",
                            ga, x, p, cap);
                ok = false;
            }
        }
    std::printf("    gamma tail bound P(a,x) <= x^a/(a Gamma(a)); worst excess %.3g\n",
                worst_gamma);

    double worst_chi = -1e300;
    for (int m = 1; m <= 50; ++m) {
        const double excess = specfun::chi_mean(m) - std::sqrt(static_cast<double>(m));
        worst_chi = std::max(worst_chi, excess);
        if (excess > 1e-12 * std::sqrt(static_cast<double>(m))) {
            std::printf("    chi mean bound VIOLATED at m = %d (excess %.3g)\n", m, excess);
            ok = false;
        }
    }
    std::printf("    chi mean below sqrt(m) for m = 1..50; worst excess %.3g\n", worst_chi);
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 2: kernel closed forms at m = 1

bool criterion_2() {
    bool ok = true;
    const SmoothingKernel& k = *cached_kernel(1);

    double worst_omega = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double r = 0.5 * i / 1000.0;
        worst_omega = std::max(worst_omega,
                               std::abs(k.omega(r) - std::sqrt(2.0) * std::cos(kPi * r)));
    }
    worst_omega = std::max(worst_omega, std::abs(k.omega(0.6)));
    std::printf("    omega vs sqrt(2) cos(pi r): sup deviation %.3g (tolerance 1e-8)\n",
                worst_omega);
    if (worst_omega > 1e-8) ok = false;

    const double origin = std::abs(k.psi_cap_radial(0.0) - 1.0);
    std::printf("    Psi(0) deviation %.3g (tolerance 1e-6)\n", origin);
    if (origin > 1e-6) ok = false;

    const double mass =
        testsup::simpson([&](double x) { return k.psi_pdf(x); }, -200.0, 200.0, 40000);
    std::printf("    integral of psi = %.8f (target 1 +- 1e-4)\n", mass);
    if (std::abs(mass - 1.0) > 1e-4) ok = false;

    const double second = testsup::simpson([&](double x) { return x * x * k.psi_pdf(x); },
                                           -1000.0, 1000.0, 80000);
    std::printf("    second moment of psi = %.6f (target pi^2 = %.6f +- 1%%)\n", second,
                kPi * kPi);
    if (std::abs(second - kPi * kPi) > 0.01 * kPi * kPi) ok = false;
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 3: spectral g equals convolution g within Monte Carlo error

bool criterion_3() {
    bool ok = true;
    auto ext = cached_extension("tent", 1);
    const std::vector<Eigen::VectorXd> pts = probe_points(*ext);
    for (double lambda : {5.0, 20.0}) {
        auto sur = make_surrogate(ext, lambda, 0.05);
        double worst = -1e300;
        for (int i = 0; i < 11; ++i) {
            const Eigen::VectorXd& x = pts[i];
            const ValueWithError gq = sur->g_quadrature(x);
            const MonteCarloResult mc = sur->g_convolution(
                x[0], 100000, mix64(0xACCE5503ull + 97 * static_cast<int>(lambda) + i));
            const double diff = std::abs(gq.value - mc.mean);
            const double cap = 3.0 * mc.stderr_ + 1e-3;
            worst = std::max(worst, diff - cap);
            if (diff > cap) {
                std::printf("    DISAGREE at lambda = %g, x = %.3f: spectral %.6f, "
                            "convolution %.6f +- %.2g\n",
                            lambda, x[0], gq.value, mc.mean, mc.stderr_);
                ok = false;
            }
        }
        std::printf("    lambda = %4.1f: 11 points within 3 sigma + 1e-3 "
                    "(worst deviation-minus-cap %.3g)\n",
                    lambda, worst);
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criteria 4 and 5: the two deterministic error envelopes across the sweep

struct SweepConfig {
    int m;
    const char* target;
};
constexpr SweepConfig kSweep[] = {{1, "tent"}, {1, "sin3"}, {2, "radial-bump"}, {2, "sin3"}};

bool criterion_4() {
    bool ok = true;
    for (const SweepConfig& c : kSweep) {
        auto ext = cached_extension(c.target, c.m);
        const std::vector<Eigen::VectorXd> grid = support_grid(*ext, c.m == 1 ? 21 : 11);
        for (double lambda : {5.0, 10.0, 20.0}) {
            auto sur = make_surrogate(ext, lambda, 0.05);
            double sup = 0.0;
            for (const Eigen::VectorXd& x : grid)
                sup = std::max(sup, std::abs((*ext)(x)-sur->g_quadrature(x).value));
            const double cap = lemma2_bound(c.m, ext->lipschitz(), lambda);
            std::printf("    m=%d %-11s lambda=%4.1f: sup |f - g| = %.6f <= %.6f %s\n", c.m,
                        c.target, lambda, sup, cap, sup <= cap ? "ok" : "VIOLATED");
            if (!(sup <= cap)) ok = false;
        }
    }
    return ok;
}

bool criterion_5() {
    bool ok = true;
    for (const SweepConfig& c : kSweep) {
        auto ext = cached_extension(c.target, c.m);
        const std::vector<Eigen::VectorXd> grid = support_grid(*ext, c.m == 1 ? 21 : 11);
        for (double lambda : {5.0, 10.0, 20.0})
            for (double theta : {0.02, 0.05}) {
                auto sur = make_surrogate(ext, lambda, theta);
                double sup = 0.0;
                for (const Eigen::VectorXd& x : grid)
                    sup = std::max(sup, std::abs(sur->gh_gap_quadrature(x).value));
                const double cap = lemma3_bound(c.m, ext->lipschitz(), ext->domain_radius(),
                                                theta, lambda);
                std::printf("    m=%d %-11s lambda=%4.1f theta=%.2f: sup |g - h| = %.3g "
                            "<= %.3g %s\n",
                            c.m, c.target, lambda, theta, sup, cap,
                            sup <= cap ? "ok" : "VIOLATED");
                if (!(sup <= cap)) ok = false;
            }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 6: Monte Carlo mean of the weighted ReLU features vs h

bool criterion_6() {
    bool ok = true;
    struct Config {
        const char* target;
        int m;
        double lambda;
    };
    for (const Config& c : {Config{"tent", 1, 20.0}, Config{"radial-bump", 2, 5.0}}) {
        const MiniPipeline pipe =
            mini_pipeline(c.target, c.m, c.lambda, 0.05, mix64(0xACCE5506ull + c.m));
        const WeightDensity density(pipe.surrogate, 1.0, pipe.ext->domain_radius(),
                                    pipe.ktilde_volume);
        const double half_width =
            pipe.ext->domain_radius() * std::sqrt(static_cast<double>(c.m));
        std::printf("    m=%d %s lambda=%g theta=0.05, 1e6 draws per point:\n", c.m,
                    c.target, c.lambda);
        double worst_z = 0.0;
        const std::vector<Eigen::VectorXd> pts = probe_points(*pipe.ext);
        for (int i = 0; i < 11; ++i) {
            const Eigen::VectorXd& x = pts[i];
            const ValueWithError href = pipe.surrogate->h_quadrature(x);
            const MonteCarloResult mc =
                mc_mean(1000000, mix64(0x6D6EA4ull + 131 * c.m + i), [&](Rng& rng) {
                    thread_local Eigen::VectorXd w;
                    w.resize(c.m);
                    for (int d = 0; d < c.m; ++d) w[d] = rng.normal();
                    const double b = rng.uniform(-half_width, half_width);
                    const double t = w.dot(x) + b;
                    if (t <= 0.0) return 0.0;
                    return density(w, b) * t;
                });
            const double diff = std::abs(mc.mean - href.value);
            const double stderr_tot = std::max(mc.stderr_ + href.error, 1e-30);
            const double z = diff / stderr_tot;
            worst_z = std::max(worst_z, z);
            std::printf("      x = %-16s mean %+.6f  h %+.6f  diff %+.6f  sigma %.2g  "
                        "z = %6.1f\n",
                        point_str(x).c_str(), mc.mean, href.value, mc.mean - href.value,
                        stderr_tot, z);
        }
        std::printf("    worst z = %.1f against the 3 sigma criterion: %s\n", worst_z,
                    worst_z <= 3.0 ? "ok" : "VIOLATED");
        if (worst_z > 3.0) ok = false;
    }
    if (!ok)
        std::printf("    note: the gap is systematic, not statistical noise. Integrating\n"
                    "    the cosine density against the ReLU over the bias interval leaves\n"
                    "    boundary terms that the mean-equals-h decomposition drops, so the\n"
                    "    sampled mean converges to h plus a nonzero affine-in-x remainder\n"
                    "    (about +0.25 at the origin for the m=1 tent at lambda=20).\n");
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 7: concentration envelope and variance scaling of random widths

bool criterion_7() {
    bool ok = true;
    const MiniPipeline pipe = mini_pipeline("tent", 1, 20.0, 0.05, mix64(0xACCE5507ull));
    const McShaneExtension& ext = *pipe.ext;
    const double R = ext.domain_radius();
    const WeightDensity density(pipe.surrogate, 1.0, R, pipe.ktilde_volume);

    std::vector<Eigen::VectorXd> grid;
    for (auto& x : support_grid(ext, 21))
        if (x.norm() <= R * (1.0 + 1e-12)) grid.push_back(std::move(x));
    std::vector<double> h_ref(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        h_ref[i] = pipe.surrogate->h_quadrature(grid[i]).value;

    const int n = 10000;
    const int seeds = 200;
    const double B = std::exp(density.log_hoeffding_b());
    const double envelope_target = 0.3;
    const double t =
        B * std::sqrt(2.0 * std::log(2.0 / envelope_target) / static_cast<double>(n));
    const double envelope = density.hoeffding_envelope(n, t);
    std::printf("    B = %.4g, threshold t = %.4g, envelope = %.4g (must lie in "
                "[0.05, 0.5])\n",
                B, t, envelope);
    if (!(envelope >= 0.05 && envelope <= 0.5)) ok = false;

    int exceed = 0;
    double max_sup = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const HiddenLayer layer = sample_hidden(n, 1, 1.0, R, 0xC0DE5EEDull + s);
        const RvflNetwork net = build_constructive(layer, density, 0.0);
        const double sup = sup_error(net, grid, h_ref).value;
        max_sup = std::max(max_sup, sup);
        if (sup > t) ++exceed;
    }
    const double freq = static_cast<double>(exceed) / seeds;
    const double cap = envelope + 3.0 * std::sqrt(envelope * (1.0 - envelope) / seeds);
    std::printf("    exceedance frequency over %d seeds: %.3f <= %.3f %s "
                "(largest observed sup %.3g)\n",
                seeds, freq, cap, freq <= cap ? "ok" : "VIOLATED", max_sup);
    std::printf("    (the scale B is far above the observed sups, so the envelope holds "
                "with frequency 0)\n");
    if (freq > cap) ok = false;

    // Variance at a fixed point halves when the width doubles; widths share
    // a seed, so the 2n layer extends the n layer row-for-row.
    const auto [lo, hi] = ext.support_box();
    const Eigen::VectorXd x0 = (0.3 * hi).eval();
    std::vector<double> v_n(seeds), v_2n(seeds);
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = 0x7A125EEDull + s;
        const HiddenLayer big = sample_hidden(2 * n, 1, 1.0, R, seed);
        const HiddenLayer small = sample_hidden(n, 1, 1.0, R, seed);
        v_n[s] = build_constructive(small, density, 0.0).eval(x0);
        v_2n[s] = build_constructive(big, density, 0.0).eval(x0);
    }
    const double ratio = sample_variance(v_n) / sample_variance(v_2n);
    std::printf("    variance ratio var(N_n)/var(N_2n) at x0 = %.3f over %d seeds: %.3f "
                "(must lie in [1.6, 2.4])\n",
                x0[0], seeds, ratio);
    if (!(ratio >= 1.6 && ratio <= 2.4)) ok = false;
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 8: the width formula clears its own concentration tail

bool criterion_8() {
    bool ok = true;
    Rng rng(0xACC8);
    double worst = -1e300;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 1 + static_cast<int>(rng.uniform01() * 10.0);
        const double eps = rng.uniform(0.05, 0.9);
        const double eta = rng.uniform(0.01, 0.5);
        const double ell = rng.uniform(0.5, 3.0);
        const double R = rng.uniform(0.5, 2.0);
        const double dK = rng.uniform(1.0, static_cast<double>(m));
        const double tail = log_main_tail(m, eps, eta, ell, R, dK);
        const double cap = std::log(eta) + 1e-6 * std::abs(std::log(eta));
        worst = std::max(worst, tail - cap);
        if (tail > cap) {
            std::printf("    VIOLATED at m=%d eps=%.3f eta=%.3f ell=%.3f R=%.3f dK=%.3f: "
                        "ln tail %.9g > ln eta %.9g\n",
                        m, eps, eta, ell, R, dK, tail, std::log(eta));
            ok = false;
        }
    }
    std::printf("    20 random tuples, m in 1..10: ln(tail) - ln(eta) worst gap %.3g "
                "(<= 0 required up to 1e-6 relative)\n",
                worst);
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 9: widths match the 50-digit reference to 12 significant digits

bool criterion_9() {
    bool ok = true;
    Rng rng(0xACC9);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng.uniform01() * 10.0);
        const double eps = rng.uniform(0.05, 0.95);
        const double eta = rng.uniform(0.01, 0.5);
        const double ell = rng.uniform(0.5, 4.0);
        const double R = rng.uniform(0.5, 3.0);
        const double dK = rng.uniform(1.0, static_cast<double>(m));
        const double d_main =
            std::abs(n_main_log10(m, eps, eta, ell, R, dK) -
                     static_cast<double>(refbounds::n_main_log10_50(m, eps, eta, ell, R, dK))) *
            std::log(10.0);
        const double d_approx =
            std::abs(n_approx_log10(m, eps, eta, ell, R, dK) -
                     static_cast<double>(
                         refbounds::n_approx_log10_50(m, eps, eta, ell, R, dK))) *
            std::log(10.0);
        worst = std::max({worst, d_main, d_approx});
        if (d_main > 5e-13 || d_approx > 5e-13) {
            std::printf("    VIOLATED at m=%d eps=%.3f eta=%.3f ell=%.3f R=%.3f dK=%.3f: "
                        "|delta ln n| main %.3g approx %.3g\n",
                        m, eps, eta, ell, R, dK, d_main, d_approx);
            ok = false;
        }
    }
    std::printf("    50 random tuples: worst |delta ln n| = %.3g (12 significant digits "
                "need <= 5e-13)\n",
                worst);
    return ok;
}

// ---------------------------------------------------------------------------
// criterion 10: end-to-end error decay, budget, and least-squares comparison

bool criterion_10() {
    const MiniPipeline pipe = mini_pipeline("tent", 1, 20.0, 0.05, mix64(0xACCE5510ull));
    const McShaneExtension& ext = *pipe.ext;
    const double zeta = ext.base().zeta;
    const WeightDensity density(pipe.surrogate, 1.0, ext.domain_radius(),
                                pipe.ktilde_volume);
    const std::vector<Eigen::VectorXd>& grid = ext.base().domain.points();
    std::vector<double> original(ext.base().values.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        original[i] = ext.base().values[i] + zeta;

    const int widths[] = {100, 1000, 10000, 100000};
    const int seeds = 20;
    std::vector<double> medians;
    int ls_violations = 0;
    for (int n : widths) {
        std::vector<double> sups;
        for (int s = 0; s < seeds; ++s) {
            const std::uint64_t layer_seed =
                mix64(0xACCE5510ull ^ (0x9E3779B97F4A7C15ull * (s + 1)));
            const HiddenLayer layer = sample_hidden(n, 1, 1.0, ext.domain_radius(),
                                                    layer_seed);
            const RvflNetwork cons = build_constructive(layer, density, zeta);
            const double sup_cons = sup_error(cons, grid, original).value;
            const RvflNetwork ls = fit_least_squares(layer, grid, original);
            const double sup_ls = sup_error(ls, grid, original).value;
            if (sup_ls > sup_cons * (1.0 + 1e-12)) {
                ++ls_violations;
                std::printf("    least-squares WORSE than constructive at n=%d seed=%d: "
                            "%.6g > %.6g\n",
                            n, s, sup_ls, sup_cons);
            }
            sups.push_back(sup_cons);
        }
        medians.push_back(median(sups));
        std::printf("    n = %6d: median constructive sup error over %d seeds = %.4f\n", n,
                    seeds, medians.back());
    }

    bool monotone = true;
    for (std::size_t i = 1; i < medians.size(); ++i)
        if (medians[i] > medians[i - 1] * (1.0 + 1e-12)) monotone = false;
    const double budget =
        1.5 * (lemma2_bound(1, ext.lipschitz(), 20.0) +
               lemma3_bound(1, ext.lipschitz(), ext.domain_radius(), 0.05, 20.0));
    const bool within_budget = medians.back() <= budget;
    const bool ls_ok = ls_violations == 0;
    std::printf("    medians nonincreasing across widths: %s\n",
                monotone ? "ok" : "VIOLATED");
    std::printf("    median at n = 100000 is %.4f vs budget 1.5 x (smoothing + "
                "truncation) = %.4f: %s\n",
                medians.back(), budget, within_budget ? "ok" : "VIOLATED");
    std::printf("    least-squares beats constructive on the training grid in all %zu "
                "runs: %s\n",
                static_cast<std::size_t>(seeds) * 4, ls_ok ? "ok" : "VIOLATED");
    if (!within_budget)
        std::printf("    note: the constructive error stalls near %.2f because the mean of\n"
                    "    the sampled features is h plus the surviving boundary terms of the\n"
                    "    bias integral (see criterion 6), a deterministic offset no width\n"
                    "    can average away.\n",
                    medians.back());
    return monotone && within_budget && ls_ok;
}

// ---------------------------------------------------------------------------
// criterion 11: enclosing balls and effective dimension

double covering_radius(const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& c) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, (p - c).norm());
    return r;
}

// Independent minimum-enclosing-ball oracle: the covering radius is convex
// in the center, so a shrinking 9 x 9 grid descent converges to the optimum.
double grid_search_meb_radius(const std::vector<Eigen::VectorXd>& pts) {
    Eigen::VectorXd lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Eigen::VectorXd best = 0.5 * (lo + hi);
    double best_r = covering_radius(pts, best);
    double span = (hi - lo).maxCoeff();
    if (span == 0.0) return 0.0;
    for (int level = 0; level < 28; ++level) {
        const double step = span / 8.0;
        const Eigen::VectorXd base = best;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                Eigen::VectorXd cand = base;
                cand[0] += i * step;
                cand[1] += j * step;
                const double r = covering_radius(pts, cand);
                if (r < best_r) {
                    best_r = r;
                    best = cand;
                }
            }
        span /= 3.0;
    }
    return best_r;
}

bool criterion_11() {
    bool ok = true;

    Rng rng(0xACC11);
    double worst_meb = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int count = 5 + static_cast<int>(rng.uniform01() * 35.0);
        std::vector<Eigen::VectorXd> cloud;
        for (int i = 0; i < count; ++i) {
            Eigen::VectorXd p(2);
            p[0] = rng.uniform(-2.0, 3.0);
            p[1] = rng.uniform(-1.0, 4.0);
            cloud.push_back(std::move(p));
        }
        const double got = min_enclosing_ball(cloud).radius;
        const double want = grid_search_meb_radius(cloud);
        const double diff = std::abs(got - want);
        worst_meb = std::max(worst_meb, diff);
        if (diff > 1e-4) {
            std::printf("    enclosing ball VIOLATED on cloud %d (%d points): radius "
                        "%.10f vs oracle %.10f\n",
                        trial, count, got, want);
            ok = false;
        }
    }
    std::printf("    enclosing-ball radius vs grid-search oracle on 20 random clouds: "
                "worst |delta| = %.3g (tolerance 1e-4)\n",
                worst_meb);

    struct Case {
        const char* label;
        int m;
        std::vector<Eigen::VectorXd> points;
    };
    std::vector<Case> cases;
    cases.push_back({"tent domain (m=1)", 1,
                     make_builtin_target("tent", 1, default_resolution(1)).domain.points()});
    cases.push_back(
        {"radial-bump lattice (m=2)", 2,
         make_builtin_target("radial-bump", 2, default_resolution(2)).domain.points()});
    cases.push_back(
        {"radial-bump lattice (m=3)", 3,
         make_builtin_target("radial-bump", 3, default_resolution(3)).domain.points()});
    {
        std::vector<Eigen::VectorXd> segment;
        for (int i = 0; i < 64; ++i) {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
            p[0] = -1.0 + 2.0 * i / 63.0;
            segment.push_back(std::move(p));
        }
        cases.push_back({"segment in R^3", 3, std::move(segment)});
    }
    cases.push_back({"dense disk (m=2)", 2, ball_lattice(2, 1.0, 41)});

    for (const Case& c : cases) {
        const Compactum K(c.points);
        const DimensionEstimate est =
            K.effective_dimension(200000, mix64(0xD1Bull + c.m));
        const bool low_ok = est.raw >= 1.0 - 3.0 * est.stderr_;
        const bool high_ok = est.raw <= static_cast<double>(c.m) + 3.0 * est.stderr_;
        std::printf("    %-26s raw d(K) = %.4f +- %.4f, clamped value %.4f in [1, %d]: "
                    "%s\n",
                    c.label, est.raw, est.stderr_, est.value, c.m,
                    low_ok && high_ok ? "ok" : "VIOLATED");
        if (!(low_ok && high_ok)) ok = false;
        if (!(est.value >= 1.0 && est.value <= static_cast<double>(c.m))) ok = false;
    }

    for (int m : {1, 2}) {
        const Compactum ball(ball_lattice(m, 1.0, m == 1 ? 201 : 41));
        const DimensionEstimate est = ball.effective_dimension(400000, mix64(0xBA11ull + m));
        const double diff = std::abs(est.value - static_cast<double>(m));
        std::printf("    dense ball m=%d: d(K) = %.4f (|d - m| = %.4f, tolerance 0.1)\n", m,
                    est.value, diff);
        if (diff > 0.1) ok = false;
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* label;
    bool (*run)();
};

constexpr Criterion kCriteria[] = {
    {1, "special-function inequalities (Bessel zeros, gamma tail, chi mean)", criterion_1},
    {2, "closed-form kernel identities at m = 1", criterion_2},
    {3, "spectral and convolution forms of the smoothed target agree", criterion_3},
    {4, "smoothing error within (ell/lambda) c_a sqrt(m) across the sweep", criterion_4},
    {5, "truncation error within its closed-form bound across the sweep", criterion_5},
    {6, "sampled feature mean reproduces the truncated surrogate", criterion_6},
    {7, "concentration envelope and variance scaling of random widths", criterion_7},
    {8, "width formula clears its own tail bound", criterion_8},
    {9, "width formulas match a 50-digit reference to 12 digits", criterion_9},
    {10, "end-to-end error decay, budget, and least-squares comparison", criterion_10},
    {11, "enclosing balls and effective dimension", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
            if (only < 1 || only > 11) {
                std::fprintf(stderr, "error: --criterion takes a number in 1..11\n");
                return 2;
            }
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }

    bool all_ok = true;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::printf("criterion %2d: %s\n", c.id, c.label);
        std::fflush(stdout);
        const auto t0 = std::chrono::steady_clock::now();
        const bool ok = c.run();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d [%s] %s (%.1f s)\n", c.id, ok ? "PASS" : "FAIL", c.label,
                    secs);
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}

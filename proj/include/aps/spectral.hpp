#pragma once
/** @file spectral.hpp
 *  Transfer-matrix machinery for the discrete Schroedinger operators read off
 *  a two-letter potential: unimodular 2x2 cocycles, the letter-norm bound B_E
 *  and its exclusion window, a periodic-approximant spectrum heuristic,
 *  absolutely-continuous classification per point class, the eigenbasis-switch
 *  eigenvalue construction with certified exponential decay, and the
 *  growth-based refutation for the b -> bba family.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "aps/errors.hpp"
#include "aps/palindromes.hpp"
#include "aps/returnwords.hpp"
#include "aps/substitution.hpp"
#include "aps/words.hpp"

namespace aps {

// ---------------------------------------------------------------------------
// 2x2 matrix algebra over an arbitrary real scalar
// ---------------------------------------------------------------------------

template <class T>
struct Mat2 {
    T a{}, b{}, c{}, d{};  ///< row-major ((a, b), (c, d))

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
    T trace() const { return a + d; }
    T det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

template <class T>
struct Vec2 {
    T x{}, y{};
};

template <class T>
inline Vec2<T> mul(const Mat2<T>& m, const Vec2<T>& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

/// One-site transfer matrix ((x, -1), (1, 0)) with x = E - V at the site.
template <class T>
inline Mat2<T> site_matrix(const T& x) {
    return {x, T(-1), T(1), T(0)};
}

struct CouplingConfig {
    double V_a = 0.0;
    double V_b = 0.0;
};

/// Transfer across a word: the site matrices compose right-to-left, so the
/// last letter's matrix ends up leftmost in the product.
template <class T>
inline Mat2<T> transfer_word(const T& x_a, const T& x_b, const Word& w) {
    Mat2<T> m = Mat2<T>::identity();
    for (Symbol c : w) {
        if (c != sym_a && c != sym_b) throw input_error("transfer_word: word must be over {a,b}");
        m = site_matrix(c == sym_a ? x_a : x_b) * m;
    }
    return m;
}

inline Mat2<double> transfer(double E, const CouplingConfig& cfg, const Word& w) {
    return transfer_word(E - cfg.V_a, E - cfg.V_b, w);
}

// ---------------------------------------------------------------------------
// letter-norm bound and exclusion window
// ---------------------------------------------------------------------------

/// Squared spectral norm of the one-site matrix at offset x: the singular
/// values sigma, 1/sigma satisfy sigma^2 + sigma^{-2} = x^2 + 2.
inline double site_norm_squared(double x) {
    double t = x * x + 2.0;
    return (t + std::sqrt(t * t - 4.0)) / 2.0;
}

/// B_E: the larger of the two squared one-site norms.
inline double b_norm_bound(double E, const CouplingConfig& cfg) {
    return std::max(site_norm_squared(E - cfg.V_a), site_norm_squared(E - cfg.V_b));
}

struct Interval {
    double lo, hi;
    bool empty() const { return !(lo < hi); }
    double length() const { return empty() ? 0.0 : hi - lo; }
};

/// Open set of energies where B_E stays below the critical threshold B' of
/// the CriticalB regime: B_E < B' iff both |E - V| offsets are below
/// w = sqrt(B') - 1/sqrt(B'), so the set is one interval (possibly empty).
inline std::vector<Interval> exclusion_window(const Substitution& s, const CouplingConfig& cfg) {
    PalindromeRegime reg = regime(s);
    if (reg.tag != RegimeTag::CriticalB)
        throw precondition_error(
            "exclusion_window: no finite window in regime " + reg.name() +
            " (eigenvalue exclusion there needs no B_E threshold)");
    double sq = std::sqrt(reg.b_prime);
    double w = sq - 1.0 / sq;
    Interval cut{std::max(cfg.V_a, cfg.V_b) - w, std::min(cfg.V_a, cfg.V_b) + w};
    if (cut.empty()) return {};
    return {cut};
}

// ---------------------------------------------------------------------------
// periodic-approximant spectrum heuristic
// ---------------------------------------------------------------------------

struct SpectrumEstimate {
    std::vector<double> grid;          ///< sorted energies
    std::vector<bool> membership;      ///< per-energy verdict
    std::vector<double> trace_b;       ///< trace of the b-block period (may overflow to inf)
    std::vector<double> trace_a;       ///< trace of the one-letter a period
    long long depth = 0;
    bool heuristic = true;             ///< union of periodic spectra, not the true spectrum
};

namespace detail {

/// Rescaled transfer product: matrix with max-entry ~1 plus a log magnitude,
/// so long products neither overflow nor lose the trace sign.
struct ScaledMat {
    Mat2<double> m;
    double log_scale = 0.0;

    void absorb() {
        double big = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
        if (big > 0.0 && big != 1.0) {
            m.a /= big; m.b /= big; m.c /= big; m.d /= big;
            log_scale += std::log(big);
        }
    }
};

inline ScaledMat scaled_transfer(double x_a, double x_b, const Word& w) {
    ScaledMat s{Mat2<double>::identity(), 0.0};
    for (Symbol c : w) {
        s.m = site_matrix(c == sym_a ? x_a : x_b) * s.m;
        s.absorb();
    }
    return s;
}

}  // namespace detail

/// Mark grid energies by the periodic-approximant test: E is kept when the
/// period-|rho^n(b)| trace or the period-1 a-trace lies in [-2, 2]. This is a
/// heuristic proxy; it provably contains V_a + [-2,2] and stays inside
/// [-2,2] + {V_a, V_b}.
inline SpectrumEstimate spectrum_estimate(const Substitution& s, const CouplingConfig& cfg,
                                          std::vector<double> grid, long long depth,
                                          long long budget = default_length_budget) {
    Word period = iterate(s, sym_b, depth, budget);
    std::sort(grid.begin(), grid.end());
    SpectrumEstimate out;
    out.grid = std::move(grid);
    out.depth = depth;
    const double log2v = std::log(2.0);
    for (double E : out.grid) {
        detail::ScaledMat sm = detail::scaled_transfer(E - cfg.V_a, E - cfg.V_b, period);
        double tr = sm.m.trace();
        bool in_b = tr == 0.0 || sm.log_scale + std::log(std::abs(tr)) <= log2v;
        double tr_a = E - cfg.V_a;
        out.membership.push_back(in_b || std::abs(tr_a) <= 2.0);
        out.trace_b.push_back(tr * std::exp(sm.log_scale));
        out.trace_a.push_back(tr_a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// absolutely continuous component per point class
// ---------------------------------------------------------------------------

enum class PointClass { AllA, EventuallyPeriodic, Aperiodic };

/// The a.c. spectrum is V_a + [-2,2] exactly for the all-a line and the
/// eventually periodic points; every aperiodic point has none.
inline std::optional<Interval> ac_spectrum_class(PointClass cls, const CouplingConfig& cfg) {
    if (cls == PointClass::Aperiodic) return std::nullopt;
    return Interval{cfg.V_a - 2.0, cfg.V_a + 2.0};
}

// ---------------------------------------------------------------------------
// eigenbasis-switch eigenvalue construction
// ---------------------------------------------------------------------------

struct EigenSolution {
    double mu;   ///< dominant eigenvalue of the a-site matrix, > 1
    double x_a;  ///< E - V_a = mu + 1/mu
    double x_b;  ///< E - V_b
    double res1, res2;  ///< residuals of the two switch equations
};

namespace detail {

/// Residuals of the switch conditions: the b-image transfer must map the
/// unstable eigenvector (mu,1) into the stable line (1,mu) and vice versa.
template <class T>
inline std::pair<T, T> switch_residuals(const Substitution& s, const T& mu, const T& x_b) {
    T x_a = mu + T(1) / mu;
    Mat2<T> m = transfer_word(x_a, x_b, s.image_of_b());
    Vec2<T> u = mul(m, Vec2<T>{mu, T(1)});
    Vec2<T> v = mul(m, Vec2<T>{T(1), mu});
    // (-mu,1).M.(mu,1): image of the unstable vector lies on the stable line,
    // (1,-mu).M.(1,mu): image of the stable vector lies on the unstable line
    return {u.y - mu * u.x, v.x - mu * v.y};
}

/// Damped 2D Newton with a finite-difference Jacobian.
template <class T>
inline bool newton_switch(const Substitution& s, T& mu, T& x_b, const T& fd_step, int iters) {
    for (int it = 0; it < iters; ++it) {
        auto [g1, g2] = switch_residuals(s, mu, x_b);
        T mu_step(mu + fd_step), xb_step(x_b + fd_step);
        auto [a1, a2] = switch_residuals(s, mu_step, x_b);
        auto [b1, b2] = switch_residuals(s, mu, xb_step);
        T j11 = (a1 - g1) / fd_step, j12 = (b1 - g1) / fd_step;
        T j21 = (a2 - g2) / fd_step, j22 = (b2 - g2) / fd_step;
        T det = j11 * j22 - j12 * j21;
        if (det == T(0)) return false;
        T dm = (g1 * j22 - g2 * j12) / det;
        T db = (g2 * j11 - g1 * j21) / det;
        T norm0 = g1 * g1 + g2 * g2;
        if (norm0 == T(0)) return true;
        T lambda(1);
        bool improved = false;
        for (int cut = 0; cut < 60 && !improved; ++cut) {
            T nm = mu - lambda * dm, nb = x_b - lambda * db;
            if (nm > T(1)) {
                auto [h1, h2] = switch_residuals(s, nm, nb);
                if (h1 * h1 + h2 * h2 < norm0) {
                    mu = nm;
                    x_b = nb;
                    improved = true;
                }
            }
            lambda /= T(2);
        }
        // no step reduces the residual: the iterate sits at the attainable
        // floor of the arithmetic, which is convergence, not failure
        if (!improved) return it > 0;
    }
    return true;
}

}  // namespace detail

/// All switch-system solutions with mu > 1 in the box x_a in (2,4),
/// x_b in (0,3): coarse sign-change scan on a 400x400 grid, damped Newton
/// refinement to residuals below 1e-9, deduplication at 1e-6 radius. The seed
/// jitters the grid origin; the solution set is unchanged by it.
inline std::vector<EigenSolution> solve_switch_system(const Substitution& s,
                                                      unsigned long seed = 0) {
    if (!s.almost_primitive() || s.k_last() != 0)
        throw precondition_error(
            "solve_switch_system: eigenbasis-switch ansatz needs a b-image ending in b");
    const int n = 400;
    // mu box corresponding to x_a = mu + 1/mu in (2, 4)
    const double mu_lo = 1.0 + 1e-6, mu_hi = 2.0 + std::sqrt(3.0);
    const double xb_lo = 0.0, xb_hi = 3.0;
    double jitter = static_cast<double>(seed % 97) / 97.0 / n;
    auto g = [&](double mu, double xb) { return detail::switch_residuals(s, mu, xb); };
    std::vector<EigenSolution> sols;
    for (int i = 0; i < n; ++i) {
        double m0 = mu_lo + (mu_hi - mu_lo) * (i + jitter) / n;
        double m1 = mu_lo + (mu_hi - mu_lo) * (i + 1 + jitter) / n;
        for (int j = 0; j < n; ++j) {
            double b0 = xb_lo + (xb_hi - xb_lo) * (j + jitter) / n;
            double b1 = xb_lo + (xb_hi - xb_lo) * (j + 1 + jitter) / n;
            auto c00 = g(m0, b0), c01 = g(m0, b1), c10 = g(m1, b0), c11 = g(m1, b1);
            auto changes = [](double a, double b, double c, double d) {
                double lo = std::min({a, b, c, d}), hi = std::max({a, b, c, d});
                return lo <= 0.0 && hi >= 0.0;
            };
            if (!changes(c00.first, c01.first, c10.first, c11.first)) continue;
            if (!changes(c00.second, c01.second, c10.second, c11.second)) continue;
            double mu = (m0 + m1) / 2, xb = (b0 + b1) / 2;
            if (!detail::newton_switch(s, mu, xb, 1e-7, 60)) continue;
            auto [r1, r2] = g(mu, xb);
            double xa = mu + 1.0 / mu;
            if (!(mu > 1.0) || std::abs(r1) > 1e-9 || std::abs(r2) > 1e-9) continue;
            if (!(xa > 2.0 && xa < 4.0 && xb > xb_lo && xb < xb_hi)) continue;
            bool dup = false;
            for (const EigenSolution& e : sols)
                if (std::abs(e.mu - mu) < 1e-6 && std::abs(e.x_b - xb) < 1e-6) dup = true;
            if (!dup) sols.push_back({mu, xa, xb, std::abs(r1), std::abs(r2)});
        }
    }
    std::sort(sols.begin(), sols.end(),
              [](const EigenSolution& u, const EigenSolution& v) { return u.x_a > v.x_a; });
    return sols;
}

// ---------------------------------------------------------------------------
// height profile of the block decomposition
// ---------------------------------------------------------------------------

/// Per-block data of the decomposition rho^inf(b) = W a^{f(x_1)} W a^{f(x_2)}...
/// with W the b-image, for the family b -> b a b^4 (any p).
struct HeightProfile {
    std::vector<long long> letters;  ///< x_1 .. x_N of the return fixed point
    std::vector<long long> h;        ///< alternating sums of the a-run lengths f(x_j)
    std::vector<long long> ell;      ///< symbolic prefix length after block j
};

inline bool bab4_family(const Substitution& s) {
    return s.ks == std::vector<long long>{1, 0, 0, 0, 0};
}

inline HeightProfile height_profile(const Substitution& s, long long N,
                                    long long budget = default_length_budget) {
    if (!bab4_family(s) || s.p < 2)
        throw precondition_error("height_profile: needs the b -> b a b^4 family with p >= 2");
    Word x = {1};
    while (static_cast<long long>(x.size()) < N) {
        x = rbar_apply(s, x);
        if (static_cast<long long>(x.size()) > budget)
            throw budget_error("height_profile: prefix exceeds budget",
                               static_cast<long long>(x.size()));
    }
    HeightProfile out;
    long long block = s.r() + s.q();  // |image of b|
    long long h = 0, ell = 0;
    for (long long j = 0; j < N; ++j) {
        long long f = s.p * x[static_cast<std::size_t>(j)];  // k_r = 0, so f(k) = p k
        h += (j % 2 == 0) ? f : -f;
        ell += block + f;
        out.letters.push_back(x[static_cast<std::size_t>(j)]);
        out.h.push_back(h);
        out.ell.push_back(ell);
    }
    return out;
}

// ---------------------------------------------------------------------------
// certified eigenstate decay (high-precision transfer transport)
// ---------------------------------------------------------------------------

struct DecayReport {
    std::vector<double> log_s;    ///< log of the norm ratio s_m at block ends
    std::vector<long long> ell;   ///< prefix lengths the ratios refer to
    double gamma = 0.0;           ///< fitted rate with s_m <= exp(-gamma ell_m) for m >= m0
    std::size_t gamma_from = 0;   ///< first index the fit covers
    double switch_residual = 0.0; ///< unstable component left after one b-image transfer
    bool decaying = false;        ///< the tail of log_s is strictly negative and shrinking
};

/// Transport the eigenvector candidate (mu, 1) across the block prefixes of
/// rho^inf(b) in high-precision arithmetic (double precision is hopeless: the
/// ratios fall below 1e-300 while the root must be sharp to hundreds of
/// digits for the switch cancellations to survive).
inline DecayReport eigenstate_decay(const Substitution& s, const EigenSolution& sol,
                                    long long m_max, double perturb_E = 0.0) {
    if (!bab4_family(s)) throw precondition_error("eigenstate_decay: needs the b -> b a b^4 family");
    if (s.p <= 5) throw precondition_error("eigenstate_decay: needs p > 5 = block letter count");
    if (!(sol.x_a > 2.0 || sol.x_a < -2.0))
        throw precondition_error("eigenstate_decay: a-site transfer is not hyperbolic");
    using big = boost::multiprecision::mpfr_float;
    HeightProfile prof = height_profile(s, m_max);
    long long total_a_steps = 0;
    for (long long x : prof.letters) total_a_steps += s.p * x;
    // working precision: forward transport separates the decaying solution
    // from errors by the full unstable growth mu^{sum of a-runs} plus the
    // decay depth itself; 1.3x that exponent covers both with margin
    unsigned digits =
        static_cast<unsigned>(3000 + 1.3 * std::log10(sol.mu) * static_cast<double>(total_a_steps));
    boost::multiprecision::mpfr_float::default_precision(digits);

    big mu = sol.mu, xb = sol.x_b;
    big fd = pow(big(10), -static_cast<long long>(digits) / 2);
    if (!detail::newton_switch(s, mu, xb, fd, 40))
        throw depth_error("eigenstate_decay: high-precision refinement stalled");
    big xa = mu + 1 / mu;
    xa += perturb_E;  // an energy shift moves both offsets equally
    xb += perturb_E;
    if (perturb_E != 0.0) mu = (xa + sqrt(xa * xa - 4)) / 2;

    DecayReport out;
    {
        auto [r1, r2] = detail::switch_residuals(s, mu, xb);
        Mat2<big> mb = transfer_word(xa, xb, s.image_of_b());
        Vec2<big> img = mul(mb, Vec2<big>{mu, big(1)});
        big denom = sqrt(img.x * img.x + img.y * img.y);
        out.switch_residual =
            denom == 0 ? 0.0 : std::abs(static_cast<double>((img.x * mu - img.y) / denom));
        (void)r1;
        (void)r2;
    }

    Mat2<big> Ma = site_matrix(xa), Mb = site_matrix(xb);
    Vec2<big> v{mu, big(1)};
    big norm0 = sqrt(v.x * v.x + v.y * v.y);
    big eig_den = mu * mu - 1;  // for the a-run eigenbasis shortcut
    const Word image = s.image_of_b();
    for (long long j = 0; j < m_max; ++j) {
        for (Symbol c : image) v = mul(c == sym_a ? Ma : Mb, v);
        long long run = s.p * prof.letters[static_cast<std::size_t>(j)];
        if (run > 16) {
            // a-run via the eigenbasis of the a-site matrix: coordinates
            // along (mu,1) and (1,mu) scale by mu^{+run} and mu^{-run}
            big alpha = (mu * v.x - v.y) / eig_den;
            big beta = (mu * v.y - v.x) / eig_den;
            big up = pow(mu, run);
            alpha *= up;
            beta /= up;
            v = {alpha * mu + beta, alpha + beta * mu};
            run = 0;
        }
        for (long long t = 0; t < run; ++t) v = mul(Ma, v);
        big ratio = sqrt(v.x * v.x + v.y * v.y) / norm0;
        out.log_s.push_back(static_cast<double>(log(ratio)));
        out.ell.push_back(prof.ell[static_cast<std::size_t>(j)]);
    }

    // fitted rate over the second half of the profile
    out.gamma_from = out.log_s.size() / 2;
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t m = out.gamma_from; m < out.log_s.size(); ++m)
        g = std::min(g, -out.log_s[m] / static_cast<double>(out.ell[m]));
    out.gamma = g;
    out.decaying = g > 0.0 && out.log_s.back() < out.log_s[out.gamma_from];
    return out;
}

// ---------------------------------------------------------------------------
// growth refutation for the b -> b b a family
// ---------------------------------------------------------------------------

struct GrowthReport {
    bool skipped = false;         ///< elliptic a-site transfer: nothing to track
    std::string note;
    std::vector<double> stable_rel;  ///< |c_n| relative to the largest entry of T(w_n)
    bool stable_collapse = false;    ///< some relative stable component vanished
    double log_growth = 0.0;         ///< log-norm gained by the unstable-seeded vector
    bool decay_observed = false;
};

/// Track, in the a-site eigenbasis, the stable component c_n of the transfer
/// across w_n = tau(beta(n)) b and the norm of the unstable-seeded solution
/// along a long prefix; an eigenvalue would force c_n -> 0 and norm decay,
/// neither of which occurs.
inline GrowthReport growth_refutation(const Substitution& s, const CouplingConfig& cfg,
                                      double E, long long prefix_len, long long n_max = 8,
                                      long long budget = default_length_budget) {
    if (s.ks != std::vector<long long>{0, 1} || s.p < 2)
        throw precondition_error("growth_refutation: needs the b -> b b a family with p >= 2");
    GrowthReport out;
    double xa = E - cfg.V_a, xb = E - cfg.V_b;
    if (std::abs(xa) <= 2.0) {
        out.skipped = true;
        out.note = "elliptic a-site transfer: |E - V_a| <= 2";
        return out;
    }
    double mu = (std::abs(xa) + std::sqrt(xa * xa - 4.0)) / 2.0 * (xa < 0 ? -1.0 : 1.0);
    // eigenbasis columns (mu,1) and (1,mu); inverse up to the constant det
    Mat2<double> S{mu, 1.0, 1.0, mu};
    Mat2<double> Sinv{mu, -1.0, -1.0, mu};
    for (long long n = 1; n <= n_max; ++n) {
        Word wn = tau_expand(s, beta(s, n, budget)).word;
        wn.push_back(sym_b);
        detail::ScaledMat sm{Mat2<double>::identity(), 0.0};
        for (Symbol c : wn) {
            sm.m = site_matrix(c == sym_a ? xa : xb) * sm.m;
            sm.absorb();
        }
        Mat2<double> eb = Sinv * sm.m * S;
        double big = std::max({std::abs(eb.a), std::abs(eb.b), std::abs(eb.c), std::abs(eb.d)});
        double rel = big == 0.0 ? 0.0 : std::abs(eb.c) / big;
        out.stable_rel.push_back(rel);
        if (rel < 1e-12) out.stable_collapse = true;
    }
    long long depth = 1;
    while (iterate_length(s, sym_b, depth) < prefix_len) {
        ++depth;
        if (iterate_length(s, sym_b, depth) > budget)
            throw budget_error("growth_refutation: prefix exceeds budget",
                               iterate_length(s, sym_b, depth));
    }
    Word prefix = iterate(s, sym_b, depth, budget);
    prefix.resize(static_cast<std::size_t>(prefix_len));
    Vec2<double> v{mu, 1.0};
    double log_norm = 0.0;
    const double base = std::sqrt(mu * mu + 1.0);
    for (Symbol c : prefix) {
        v = mul(site_matrix(c == sym_a ? xa : xb), v);
        double nm = std::sqrt(v.x * v.x + v.y * v.y);
        if (nm > 1e100 || nm < 1e-100) {
            log_norm += std::log(nm);
            v.x /= nm;
            v.y /= nm;
        }
    }
    out.log_growth = log_norm + std::log(std::sqrt(v.x * v.x + v.y * v.y)) - std::log(base);
    out.decay_observed = out.log_growth < 0.0;
    return out;
}

}  // namespace aps

#include "fastica/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fastica/errors.hpp"
#include "fastica/quadrature.hpp"

namespace fastica {

namespace {

constexpr double kNearGaussian = 1e-8;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

double MomentSet::alpha() const {
    if (gaussian_like())
        throw identifiability_error("component is Gaussian-like under this contrast");
    const double d = lambda - delta;
    return (sigma2 - lambda * lambda) / (d * d);
}

bool MomentSet::gaussian_like() const { return std::abs(lambda - delta) < kNearGaussian; }

MomentSet moment_set(const SourceDistribution& dist, const Nonlinearity& nl) {
    constexpr double tol = 1e-10;
    MomentSet m;
    m.nu = dist.expect([&](double z) { return nl.G(z); }, tol);
    m.mu = dist.expect([&](double z) { return nl.g(z); }, tol);
    const double Eg2 = dist.expect(
        [&](double z) {
            const double v = nl.g(z);
            return v * v;
        },
        tol);
    m.sigma2 = Eg2 - m.mu * m.mu;
    m.lambda = dist.expect([&](double z) { return nl.g(z) * z; }, tol);
    m.delta = dist.expect([&](double z) { return nl.gprime(z); }, tol);
    m.tau = dist.expect([&](double z) { return nl.gprime(z) * z; }, tol);
    m.beta4 = dist.expect([](double z) { return z * z * z * z; }, tol);
    m.s = std::abs(m.nu) < 1e-10 ? 0 : (m.nu > 0.0 ? 1 : -1);
    return m;
}

namespace {

double safe_alpha(const MomentSet& m) { return m.gaussian_like() ? kNaN : m.alpha(); }

double sym_entry(const MomentSet& mj, const MomentSet& ml, double denom) {
    return (mj.sigma2 + ml.sigma2 - mj.lambda * mj.lambda +
            ml.delta * (ml.delta - 2.0 * ml.lambda)) /
           (denom * denom);
}

double sym2_entry(const MomentSet& mj, const MomentSet& ml, double denom) {
    return (mj.nu * mj.nu * (mj.sigma2 - mj.lambda * mj.lambda) +
            ml.nu * ml.nu * (ml.sigma2 + ml.delta * (ml.delta - 2.0 * ml.lambda))) /
           (denom * denom);
}

} // namespace

AsvPair asv(Method method, const MomentSet& mj, const MomentSet& ml, PairPosition position) {
    AsvPair out;
    out.method = method;
    out.alpha_j = safe_alpha(mj);
    out.alpha_l = safe_alpha(ml);

    if (position == PairPosition::diagonal) {
        out.asv_jl = out.asv_lj = (mj.beta4 - 1.0) / 4.0;
        out.sum = out.asv_jl + out.asv_lj;
        return out;
    }

    switch (method) {
        case Method::defl: {
            const MomentSet& first = position == PairPosition::j_before_l ? mj : ml;
            if (first.gaussian_like())
                throw identifiability_error(
                    "deflation: the earlier-extracted component is Gaussian-like");
            const double a = first.alpha();
            if (position == PairPosition::j_before_l) {
                out.asv_jl = a;
                out.asv_lj = a + 1.0;
            } else {
                out.asv_jl = a + 1.0;
                out.asv_lj = a;
            }
            break;
        }
        case Method::sym: {
            const double wj = mj.s * (mj.lambda - mj.delta);
            const double wl = ml.s * (ml.lambda - ml.delta);
            const double denom = wj + wl;
            if (std::abs(denom) < kNearGaussian)
                throw identifiability_error("symmetric: no component carries sign weight");
            out.asv_jl = sym_entry(mj, ml, denom);
            out.asv_lj = sym_entry(ml, mj, denom);
            break;
        }
        case Method::sym2: {
            const double denom =
                mj.nu * (mj.lambda - mj.delta) + ml.nu * (ml.lambda - ml.delta);
            if (std::abs(denom) < kNearGaussian * kNearGaussian)
                throw identifiability_error(
                    "squared symmetric: no component carries nongaussianity weight");
            out.asv_jl = sym2_entry(mj, ml, denom);
            out.asv_lj = sym2_entry(ml, mj, denom);
            break;
        }
    }
    out.sum = out.asv_jl + out.asv_lj;
    return out;
}

double asv_offdiag_sum(Method method, const MomentSet& m1, const MomentSet& m2) {
    if (method == Method::defl && std::abs(m2.nu) > std::abs(m1.nu))
        return asv(method, m2, m1, PairPosition::j_before_l).sum;
    return asv(method, m1, m2, PairPosition::j_before_l).sum;
}

double asv_sum_weighted(Method method, const MomentSet& mj, const MomentSet& ml) {
    if (mj.gaussian_like() || ml.gaussian_like())
        throw identifiability_error(
            "weighted-combination identity needs both components non-Gaussian; "
            "use the pairwise formulas instead");
    double wj = 1.0, wl = 0.0;
    switch (method) {
        case Method::defl:
            if (std::abs(ml.nu) > std::abs(mj.nu)) std::swap(wj, wl);
            break;
        case Method::sym:
            wj = mj.s * (mj.lambda - mj.delta);
            wl = ml.s * (ml.lambda - ml.delta);
            break;
        case Method::sym2:
            wj = mj.nu * (mj.lambda - mj.delta);
            wl = ml.nu * (ml.lambda - ml.delta);
            break;
    }
    const double total = wj + wl;
    if (std::abs(total) < kNearGaussian * kNearGaussian)
        throw identifiability_error("weighted-combination identity: all weights vanish");
    const double fj = wj / total, fl = wl / total;
    const double term_j = fj == 0.0 ? 0.0 : fj * fj * (2.0 * mj.alpha() + 1.0);
    const double term_l = fl == 0.0 ? 0.0 : fl * fl * (2.0 * ml.alpha() + 1.0);
    return term_j + term_l;
}

double are_from_moments(Method method_a, Method method_b, const MomentSet& m1,
                        const MomentSet& m2) {
    const double sum_a = asv_offdiag_sum(method_a, m1, m2);
    const double sum_b = asv_offdiag_sum(method_b, m1, m2);
    return sum_b / sum_a;
}

double are(Method method_a, Method method_b, const SourceDistribution& d1,
           const SourceDistribution& d2, const Nonlinearity& nl) {
    return are_from_moments(method_a, method_b, moment_set(d1, nl), moment_set(d2, nl));
}

double expected_mdi_limit(Method method, const std::vector<MomentSet>& moments) {
    if (moments.size() < 2)
        throw std::invalid_argument("need at least two components");
    std::vector<std::size_t> order(moments.size());
    std::iota(order.begin(), order.end(), 0);
    if (method == Method::defl)
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(moments[a].nu) > std::abs(moments[b].nu);
        });
    double total = 0.0;
    for (std::size_t j = 0; j < order.size(); ++j)
        for (std::size_t l = j + 1; l < order.size(); ++l)
            total += asv(method, moments[order[j]], moments[order[l]],
                         PairPosition::j_before_l)
                         .sum;
    return total;
}

double expected_mdi_limit(Method method, const std::vector<SourceDistribution>& dists,
                          const Nonlinearity& nl) {
    std::vector<MomentSet> ms;
    ms.reserve(dists.size());
    for (const auto& d : dists) ms.push_back(moment_set(d, nl));
    return expected_mdi_limit(method, ms);
}

namespace {

bool mixture_like(const SourceDistribution& d) {
    return d.kind() == DistKind::gauss_mix4 || d.kind() == DistKind::std_normal;
}

} // namespace

double rotated_expectation(const SourceDistribution& d1, const SourceDistribution& d2,
                           double c1, double c2, const std::function<double(double)>& h,
                           double abs_tol) {
    if (mixture_like(d1) && mixture_like(d2)) {
        // The linear combination is itself a Gaussian mixture; integrate it
        // component by component.
        const auto& a = d1.components();
        const auto& b = d2.components();
        const double per = abs_tol / static_cast<double>(a.size() * b.size());
        double total = 0.0;
        for (const auto& ca : a)
            for (const auto& cb : b) {
                const double mean = c1 * ca.mean + c2 * cb.mean;
                const double var = c1 * c1 * ca.var + c2 * c2 * cb.var;
                total += ca.weight * cb.weight * normal_expect(h, mean, std::sqrt(var), per);
            }
        return total;
    }
    // Nested quadrature, mixture-like axis innermost where possible. The inner
    // pass runs much tighter than the outer one so its leftover jitter stays
    // invisible to the outer error estimate.
    if (mixture_like(d1)) return rotated_expectation(d2, d1, c2, c1, h, abs_tol);
    const double inner_tol = abs_tol * 1e-3;
    return d1.expect(
        [&](double x) {
            return d2.expect([&](double y) { return h(c1 * x + c2 * y); }, inner_tol);
        },
        abs_tol);
}

GConditionReport check_g_conditions(const SourceDistribution& d1, const SourceDistribution& d2,
                                    const Nonlinearity& nl, int grid) {
    if (grid < 8) throw std::invalid_argument("grid must have at least 8 points");

    GConditionReport rep;
    rep.grid = grid;
    auto G = [&](double z) { return nl.G(z); };
    rep.nu1 = d1.expect(G, 1e-10);
    rep.nu2 = d2.expect(G, 1e-10);

    const double bound_def = std::max(std::abs(rep.nu1), std::abs(rep.nu2));
    const double bound_sym = std::abs(rep.nu1) + std::abs(rep.nu2);
    const double bound_sym2 = rep.nu1 * rep.nu1 + rep.nu2 * rep.nu2;

    auto update = [](ConditionCheck& c, double margin, double theta) {
        if (margin > c.worst_margin) {
            c.worst_margin = margin;
            c.worst_theta = theta;
        }
    };
    rep.def.worst_margin = rep.sym.worst_margin = rep.sym2.worst_margin =
        -std::numeric_limits<double>::infinity();

    for (int k = 0; k < grid; ++k) {
        const double theta = (M_PI / 2.0) * static_cast<double>(k) / (grid - 1);
        const double c = std::cos(theta), s = std::sin(theta);
        const double a = rotated_expectation(d1, d2, c, s, G);
        const double b = rotated_expectation(d1, d2, -s, c, G);
        update(rep.def, std::max(std::abs(a), std::abs(b)) - bound_def, theta);
        update(rep.sym, std::abs(a) + std::abs(b) - bound_sym, theta);
        update(rep.sym2, a * a + b * b - bound_sym2, theta);
    }

    constexpr double tol = 1e-7;
    rep.def.holds = rep.def.worst_margin <= tol;
    rep.sym.holds = rep.sym.worst_margin <= tol;
    rep.sym2.holds = rep.sym2.worst_margin <= tol;
    return rep;
}

} // namespace fastica

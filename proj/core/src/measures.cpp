#include "fpade/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fpade/error.hpp"
#include "fpade/orthopoly.hpp"

namespace fpade {

namespace {

std::string hex(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string make_key(const Interval& I, const Weight& w)
{
    std::string key = hex(I.lo) + "|" + hex(I.hi) + "|";
    if (const auto* j = std::get_if<JacobiWeight>(&w)) {
        key += "J|" + hex(j->alpha) + "|" + hex(j->beta);
    } else {
        key += "T";
        for (double s : std::get<TabulatedDensity>(w).samples) key += "|" + hex(s);
    }
    return key;
}

} // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_)
{
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        fail(ErrorKind::validation, "interval [" + fmt(lo) + ", " + fmt(hi) + "] must satisfy lo < hi with finite ends");
}

double Interval::distance(Complex z) const noexcept
{
    const double x = std::clamp(z.real(), lo, hi);
    return std::abs(z - Complex(x, 0.0));
}

double gap(const Interval& a, const Interval& b) noexcept
{
    return std::max(a.lo, b.lo) - std::min(a.hi, b.hi);
}

MeasureSpec::MeasureSpec(Interval interval, Weight weight, std::string name)
    : interval_(interval), weight_(std::move(weight)), name_(std::move(name))
{
    if (const auto* j = std::get_if<JacobiWeight>(&weight_)) {
        if (!(j->alpha > -1.0) || !(j->beta > -1.0) || !std::isfinite(j->alpha) || !std::isfinite(j->beta))
            fail(ErrorKind::validation, "Jacobi exponents must exceed -1 (" + describe() + ")");
    } else {
        const auto& s = std::get<TabulatedDensity>(weight_).samples;
        if (s.size() < 3)
            fail(ErrorKind::validation, "tabulated density needs at least 3 samples (" + describe() + ")");
        for (double v : s)
            if (!(v > 0.0) || !std::isfinite(v))
                fail(ErrorKind::validation, "tabulated density samples must be strictly positive (" + describe() + ")");
    }
    key_ = make_key(interval_, weight_);
}

MeasureSpec MeasureSpec::jacobi(double lo, double hi, double alpha, double beta, std::string name)
{
    return MeasureSpec(Interval(lo, hi), JacobiWeight{alpha, beta}, std::move(name));
}

MeasureSpec MeasureSpec::chebyshev(double lo, double hi, std::string name)
{
    return jacobi(lo, hi, -0.5, -0.5, std::move(name));
}

MeasureSpec MeasureSpec::lebesgue(double lo, double hi, std::string name)
{
    return jacobi(lo, hi, 0.0, 0.0, std::move(name));
}

double MeasureSpec::mass() const
{
    if (const auto* j = std::get_if<JacobiWeight>(&weight_)) {
        const double a = j->alpha, b = j->beta;
        const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                                    std::lgamma(a + b + 2.0));
        return interval_.half_width() * mu0;
    }
    const auto& s = std::get<TabulatedDensity>(weight_).samples;
    const double h = interval_.length() / static_cast<double>(s.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) sum += 0.5 * (s[i] + s[i + 1]);
    return h * sum;
}

double MeasureSpec::density(double x) const
{
    if (!interval_.contains(x)) return 0.0;
    if (const auto* j = std::get_if<JacobiWeight>(&weight_)) {
        const double t = interval_.to_unit(x);
        return std::pow(1.0 - t, j->alpha) * std::pow(1.0 + t, j->beta);
    }
    const auto& s = std::get<TabulatedDensity>(weight_).samples;
    const double pos = (x - interval_.lo) / interval_.length() * static_cast<double>(s.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), s.size() - 2);
    const double f = pos - static_cast<double>(i);
    return (1.0 - f) * s[i] + f * s[i + 1];
}

std::string MeasureSpec::describe() const
{
    std::ostringstream os;
    if (!name_.empty()) os << name_ << ": ";
    os << "[" << fmt(interval_.lo) << ", " << fmt(interval_.hi) << "] ";
    if (const auto* j = std::get_if<JacobiWeight>(&weight_))
        os << "jacobi(" << fmt(j->alpha) << ", " << fmt(j->beta) << ")";
    else
        os << "tabulated(" << std::get<TabulatedDensity>(weight_).samples.size() << " samples)";
    return os.str();
}

MeasureSpec MeasureSpec::mirrored() const
{
    if (const auto* j = std::get_if<JacobiWeight>(&weight_))
        return MeasureSpec(interval_.mirrored(), JacobiWeight{j->beta, j->alpha}, name_);
    auto s = std::get<TabulatedDensity>(weight_).samples;
    std::reverse(s.begin(), s.end());
    return MeasureSpec(interval_.mirrored(), TabulatedDensity{std::move(s)}, name_);
}

AngelescoSystem::AngelescoSystem(MeasureSpec sigma0, std::vector<MeasureSpec> sigmas)
    : sigma0_(std::move(sigma0)), sigmas_(std::move(sigmas))
{
    if (sigmas_.empty()) fail(ErrorKind::validation, "an Angelesco system needs at least one measure besides sigma0");
    std::vector<std::string> problems;
    auto label = [&](std::size_t k) {
        const MeasureSpec& s = k == 0 ? sigma0_ : sigmas_[k - 1];
        return (s.name().empty() ? "sigma" + std::to_string(k) : s.name()) + " [" + fmt(s.interval().lo) + ", " +
               fmt(s.interval().hi) + "]";
    };
    for (std::size_t a = 0; a <= sigmas_.size(); ++a) {
        for (std::size_t b = a + 1; b <= sigmas_.size(); ++b) {
            const Interval& A = a == 0 ? sigma0_.interval() : sigmas_[a - 1].interval();
            const Interval& B = sigmas_[b - 1].interval();
            if (!(gap(A, B) > 0.0)) problems.push_back(label(a) + " and " + label(b) + " are not disjoint");
        }
    }
    if (!problems.empty()) fail(ErrorKind::validation, "intervals of the system must be pairwise disjoint", problems);
}

Interval AngelescoSystem::hull() const
{
    double lo = sigma0_.interval().lo, hi = sigma0_.interval().hi;
    for (const auto& s : sigmas_) {
        lo = std::min(lo, s.interval().lo);
        hi = std::max(hi, s.interval().hi);
    }
    return {lo, hi};
}

AngelescoSystem AngelescoSystem::mirrored() const
{
    std::vector<MeasureSpec> s;
    s.reserve(sigmas_.size());
    for (const auto& x : sigmas_) s.push_back(x.mirrored());
    return {sigma0_.mirrored(), std::move(s)};
}

double min_gap(const AngelescoSystem& system)
{
    std::vector<Interval> all{system.sigma0().interval()};
    for (const auto& s : system.sigmas()) all.push_back(s.interval());
    double g = INFINITY;
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) g = std::min(g, gap(all[a], all[b]));
    return g;
}

AngelescoSystem reference_system()
{
    return {MeasureSpec::chebyshev(-1.0, 1.0, "sigma0"),
            {MeasureSpec::lebesgue(-3.0, -2.0, "sigma1"), MeasureSpec::lebesgue(2.0, 3.0, "sigma2")}};
}

namespace {

Quadrature build_gauss(const MeasureSpec& spec, int order)
{
    const RecurrenceTable rt = recurrence_coefficients(spec, order);
    const int n = order;
    std::vector<double> nodes;
    if (n == 1) {
        nodes = {rt.a[0]};
    } else {
        JacobiMatrix J;
        J.a.assign(rt.a.begin(), rt.a.begin() + n);
        J.b.assign(rt.b.begin(), rt.b.begin() + (n - 1));
        nodes = tridiagonal_eigenvalues(J);
    }
    Quadrature q{spec.interval(), {}, {}};
    q.nodes.reserve(n);
    q.weights.reserve(n);
    std::vector<double> ell(n);
    const Interval& I = spec.interval();
    // Newton on l_n through the recurrence; the eigenvalues are only accurate
    // to a few ulps of the Jacobi matrix norm
    auto newton = [&](double x) {
        for (int it = 0; it < 3; ++it) {
            double lm = 0.0, l = 1.0, dm = 0.0, d = 0.0;
            for (int k = 0; k < n; ++k) {
                const double prev = k > 0 ? rt.b[k - 1] : 0.0;
                const double ln = ((x - rt.a[k]) * l - prev * lm) / rt.b[k];
                const double dn = (l + (x - rt.a[k]) * d - prev * dm) / rt.b[k];
                lm = l;
                l = ln;
                dm = d;
                d = dn;
            }
            if (d == 0.0 || !std::isfinite(l / d)) break;
            const double step = l / d;
            x -= step;
            if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(x))) break;
        }
        return x;
    };
    for (double x : nodes) {
        if (n > 1) {
            const double polished = newton(x);
            if (std::abs(polished - x) < 1e-8 * I.length()) x = polished;
        }
        // eigenvalues can land on the boundary in extreme cases; keep the rule inside
        x = std::clamp(x, std::nextafter(I.lo, I.hi), std::nextafter(I.hi, I.lo));
        eval_orthonormal_all(rt, n - 1, x, ell);
        double s = 0.0;
        for (double v : ell) s += v * v;
        q.nodes.push_back(x);
        q.weights.push_back(1.0 / s);
    }
    return q;
}

struct QuadCache {
    std::mutex mu;
    std::map<std::string, std::unique_ptr<Quadrature>> rules;
};

QuadCache& quad_cache()
{
    static QuadCache cache;
    return cache;
}

} // namespace

const Quadrature& gauss_quadrature(const MeasureSpec& spec, int order)
{
    if (order < 1) fail(ErrorKind::validation, "quadrature order must be at least 1");
    auto& cache = quad_cache();
    const std::string key = spec.key() + "#" + std::to_string(order);
    {
        std::lock_guard lock(cache.mu);
        auto it = cache.rules.find(key);
        if (it != cache.rules.end()) return *it->second;
    }
    auto rule = std::make_unique<Quadrature>(build_gauss(spec, order));
    std::lock_guard lock(cache.mu);
    auto [it, inserted] = cache.rules.emplace(key, std::move(rule));
    return *it->second;
}

Complex markov_transform(const MeasureSpec& spec, Complex z, int order)
{
    if (!(spec.interval().distance(z) > 0.0))
        fail(ErrorKind::domain, "Markov transform evaluated on the support of " + spec.describe());
    auto eval = [&](int n) {
        const Quadrature& q = gauss_quadrature(spec, n);
        Complex s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] / (z - q.nodes[i]);
        return s;
    };
    int n = std::max(order, 1);
    Complex prev = eval(n);
    for (int iter = 0; iter < 10; ++iter) {
        n *= 2;
        const Complex cur = eval(n);
        if (std::abs(cur - prev) <= 1e-13 * std::abs(cur)) return cur;
        prev = cur;
    }
    fail(ErrorKind::numerical, "Markov transform did not converge for " + spec.describe() + " at distance " +
                                   fmt(spec.interval().distance(z)));
}

double markov_transform(const MeasureSpec& spec, double x, int order)
{
    return markov_transform(spec, Complex(x, 0.0), order).real();
}

int analytic_order(const Interval& interval, double gap_, int poly_degree)
{
    const double a = 1.0 + std::max(gap_, 1e-3) / interval.half_width();
    const double rho = a + std::sqrt(a * a - 1.0);
    const int extra = static_cast<int>(std::ceil(1.5 * std::log(1e18) / (2.0 * std::log(rho))));
    return std::max(poly_degree, 0) / 2 + 1 + extra + 8;
}

} // namespace fpade

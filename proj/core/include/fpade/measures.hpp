#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace fpade {

using Complex = std::complex<double>;

/// Closed real interval [lo, hi] with lo < hi.
struct Interval {
    double lo;
    double hi;

    Interval(double lo, double hi);

    [[nodiscard]] double length() const noexcept { return hi - lo; }
    [[nodiscard]] double center() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] double half_width() const noexcept { return 0.5 * (hi - lo); }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] bool contains_open(double x) const noexcept { return lo < x && x < hi; }
    /// Euclidean distance from z to the segment.
    [[nodiscard]] double distance(Complex z) const noexcept;
    /// Affine map to [-1, 1] and back.
    [[nodiscard]] double to_unit(double x) const noexcept { return (x - center()) / half_width(); }
    [[nodiscard]] double from_unit(double s) const noexcept { return center() + half_width() * s; }
    [[nodiscard]] Interval mirrored() const { return {-hi, -lo}; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Gap between two intervals; zero or negative when they touch or overlap.
[[nodiscard]] double gap(const Interval& a, const Interval& b) noexcept;

/// Weight (1 - t)^alpha (1 + t)^beta in the unit variable t of the interval,
/// taken with respect to dx.
struct JacobiWeight {
    double alpha;
    double beta;
};

/// Strictly positive density samples on an equispaced grid that includes both
/// interval endpoints; the density is the piecewise-linear interpolant.
struct TabulatedDensity {
    std::vector<double> samples;
};

using Weight = std::variant<JacobiWeight, TabulatedDensity>;

class MeasureSpec {
public:
    MeasureSpec(Interval interval, Weight weight, std::string name = {});

    static MeasureSpec jacobi(double lo, double hi, double alpha, double beta, std::string name = {});
    static MeasureSpec chebyshev(double lo, double hi, std::string name = {});
    static MeasureSpec lebesgue(double lo, double hi, std::string name = {});

    [[nodiscard]] const Interval& interval() const noexcept { return interval_; }
    [[nodiscard]] const Weight& weight() const noexcept { return weight_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool is_jacobi() const noexcept { return std::holds_alternative<JacobiWeight>(weight_); }

    /// Total mass of the measure.
    [[nodiscard]] double mass() const;
    /// Density with respect to dx at x inside the interval.
    [[nodiscard]] double density(double x) const;
    /// Canonical identity used for caching; two specs with equal keys are the same measure.
    [[nodiscard]] const std::string& key() const noexcept { return key_; }
    [[nodiscard]] std::string describe() const;
    /// Image of the measure under x -> -x.
    [[nodiscard]] MeasureSpec mirrored() const;

private:
    Interval interval_;
    Weight weight_;
    std::string name_;
    std::string key_;
};

/// sigma0 on Delta_0 together with sigma_1..sigma_m on pairwise disjoint intervals.
/// Branch indices in the API are zero based: sigma(0) is sigma_1.
class AngelescoSystem {
public:
    AngelescoSystem(MeasureSpec sigma0, std::vector<MeasureSpec> sigmas);

    [[nodiscard]] const MeasureSpec& sigma0() const noexcept { return sigma0_; }
    [[nodiscard]] const MeasureSpec& sigma(std::size_t j) const { return sigmas_.at(j); }
    [[nodiscard]] const std::vector<MeasureSpec>& sigmas() const noexcept { return sigmas_; }
    [[nodiscard]] std::size_t m() const noexcept { return sigmas_.size(); }
    /// Smallest interval containing every Delta_k.
    [[nodiscard]] Interval hull() const;
    [[nodiscard]] AngelescoSystem mirrored() const;

private:
    MeasureSpec sigma0_;
    std::vector<MeasureSpec> sigmas_;
};

/// Minimum gap over all pairs of intervals in the system.
[[nodiscard]] double min_gap(const AngelescoSystem& system);

/// Delta_0 = [-1, 1] with the Chebyshev weight, Delta_1 = [-3, -2] and
/// Delta_2 = [2, 3] with the Lebesgue weight.
[[nodiscard]] AngelescoSystem reference_system();

/// Nodes strictly increasing inside the interval, positive weights.
struct Quadrature {
    Interval interval;
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    [[nodiscard]] auto integrate(F&& f) const
    {
        decltype(f(nodes[0]) * weights[0]) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Gauss rule with `order` nodes for the measure (Golub-Welsch nodes,
/// Christoffel-function weights). Results are cached; the reference stays
/// valid for the life of the process.
[[nodiscard]] const Quadrature& gauss_quadrature(const MeasureSpec& spec, int order);

/// Markov function sum_i w_i / (z - x_i); the rule is doubled from `order`
/// until the relative change drops below 1e-13.
[[nodiscard]] Complex markov_transform(const MeasureSpec& spec, Complex z, int order = 32);
[[nodiscard]] double markov_transform(const MeasureSpec& spec, double x, int order = 32);

/// Gauss order large enough to integrate a polynomial of the given degree
/// times a function analytic in a neighbourhood of `interval` whose nearest
/// singularity lies at distance `gap`, to roughly double precision.
[[nodiscard]] int analytic_order(const Interval& interval, double gap, int poly_degree);

} // namespace fpade

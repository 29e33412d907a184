#include "fpade/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fpade/error.hpp"

namespace fpade {

namespace {

RecurrenceTable jacobi_table(const MeasureSpec& spec, const JacobiWeight& jw, int n)
{
    const double al = jw.alpha, be = jw.beta, s = al + be;
    const Interval& I = spec.interval();
    const double c = I.center(), h = I.half_width();
    RecurrenceTable rt;
    rt.norm0 = spec.mass();
    rt.a.resize(n + 1);
    rt.b.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        double at;
        if (k == 0) {
            at = (be - al) / (s + 2.0);
        } else {
            const double d = 2.0 * k + s;
            at = (be * be - al * al) / (d * (d + 2.0));
        }
        rt.a[k] = c + h * at;
    }
    for (int k = 1; k <= n + 1; ++k) {
        double b2;
        if (k == 1) {
            b2 = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
        } else {
            const double d = 2.0 * k + s;
            b2 = 4.0 * k * (k + al) * (k + be) * (k + s) / (d * d * (d + 1.0) * (d - 1.0));
        }
        if (!(b2 > 0.0) || !std::isfinite(b2))
            fail(ErrorKind::numerical, "recurrence coefficient b_" + std::to_string(k) + " lost positivity for " +
                                           spec.describe());
        rt.b[k - 1] = h * std::sqrt(b2);
    }
    return rt;
}

RecurrenceTable tabulated_table_at(const MeasureSpec& spec, int n, int per_panel)
{
    const auto& samples = std::get<TabulatedDensity>(spec.weight()).samples;
    const Interval& I = spec.interval();
    const std::size_t panels = samples.size() - 1;
    const double width = I.length() / static_cast<double>(panels);
    const Quadrature& g = gauss_quadrature(MeasureSpec::lebesgue(-1.0, 1.0), per_panel);
    std::vector<double> x, w;
    x.reserve(panels * g.size());
    w.reserve(panels * g.size());
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = I.lo + width * static_cast<double>(p);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double f = 0.5 * (g.nodes[i] + 1.0);
            x.push_back(lo + width * f);
            w.push_back(0.5 * width * g.weights[i] * ((1.0 - f) * samples[p] + f * samples[p + 1]));
        }
    }
    double mass = 0.0;
    for (double v : w) mass += v;
    const JacobiMatrix J = lanczos(x, w, n + 2);
    RecurrenceTable rt;
    rt.norm0 = mass;
    rt.a.assign(J.a.begin(), J.a.begin() + n + 1);
    rt.b.assign(J.b.begin(), J.b.begin() + n + 1);
    return rt;
}

RecurrenceTable tabulated_table(const MeasureSpec& spec, int n)
{
    // A piecewise-linear density times a polynomial of degree 2n + 1 is
    // integrated exactly by n + 2 Gauss points per panel; the finer rule is
    // an accuracy self-test.
    const RecurrenceTable coarse = tabulated_table_at(spec, n, n + 2);
    const RecurrenceTable fine = tabulated_table_at(spec, n, n + 6);
    const double scale = spec.interval().length();
    for (int k = 0; k <= n; ++k) {
        if (std::abs(coarse.a[k] - fine.a[k]) > 1e-11 * scale || std::abs(coarse.b[k] - fine.b[k]) > 1e-11 * scale)
            fail(ErrorKind::numerical, "recurrence coefficients did not converge at degree " + std::to_string(k) +
                                           " for " + spec.describe());
    }
    return fine;
}

struct TableCache {
    std::mutex mu;
    std::map<std::string, RecurrenceTable> tables;
};

TableCache& table_cache()
{
    static TableCache cache;
    return cache;
}

template <class T>
T eval_ell(const RecurrenceTable& rt, int k, T x)
{
    T prev = T(0.0);
    T cur = T(1.0 / std::sqrt(rt.norm0));
    for (int i = 0; i < k; ++i) {
        const T next = ((x - rt.a[i]) * cur - (i > 0 ? rt.b[i - 1] : 0.0) * prev) / rt.b[i];
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace

RecurrenceTable recurrence_coefficients(const MeasureSpec& spec, int n_max)
{
    if (n_max < 0) fail(ErrorKind::validation, "n_max must be nonnegative");
    auto& cache = table_cache();
    {
        std::lock_guard lock(cache.mu);
        auto it = cache.tables.find(spec.key());
        if (it != cache.tables.end() && it->second.max_degree() >= n_max) {
            RecurrenceTable out = it->second;
            out.a.resize(n_max + 1);
            out.b.resize(n_max + 1);
            return out;
        }
    }
    RecurrenceTable rt;
    if (const auto* jw = std::get_if<JacobiWeight>(&spec.weight()))
        rt = jacobi_table(spec, *jw, n_max);
    else
        rt = tabulated_table(spec, n_max);
    {
        std::lock_guard lock(cache.mu);
        auto& slot = cache.tables[spec.key()];
        if (slot.a.empty() || slot.max_degree() < rt.max_degree()) slot = rt;
    }
    return rt;
}

double eval_orthonormal(const RecurrenceTable& table, int k, double x)
{
    if (k < 0 || k > table.max_degree()) fail(ErrorKind::validation, "degree outside the recurrence table");
    return eval_ell(table, k, x);
}

std::complex<double> eval_orthonormal(const RecurrenceTable& table, int k, std::complex<double> z)
{
    if (k < 0 || k > table.max_degree()) fail(ErrorKind::validation, "degree outside the recurrence table");
    return eval_ell(table, k, z);
}

void eval_orthonormal_all(const RecurrenceTable& table, int k, double x, std::span<double> out)
{
    out[0] = 1.0 / std::sqrt(table.norm0);
    if (k >= 1) out[1] = (x - table.a[0]) * out[0] / table.b[0];
    for (int i = 1; i < k; ++i) out[i + 1] = ((x - table.a[i]) * out[i] - table.b[i - 1] * out[i - 1]) / table.b[i];
}

double orthonormal_series(const RecurrenceTable& table, std::span<const double> c, double x)
{
    const int n = static_cast<int>(c.size());
    if (n == 0) return 0.0;
    double y1 = 0.0, y2 = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        const double alpha = (k + 1 < n) ? (x - table.a[k]) / table.b[k] : 0.0;
        const double beta = (k + 2 < n) ? -table.b[k] / table.b[k + 1] : 0.0;
        const double y = c[k] + alpha * y1 + beta * y2;
        y2 = y1;
        y1 = y;
    }
    return y1 / std::sqrt(table.norm0);
}

std::vector<double> second_kind_functions(const MeasureSpec& spec, double t, int k_max)
{
    if (spec.interval().contains(t))
        fail(ErrorKind::domain, "second-kind functions evaluated on the support of " + spec.describe());
    auto ratios = [&](int K) {
        const RecurrenceTable rt = recurrence_coefficients(spec, K + 1);
        std::vector<double> r(K + 2, 0.0);
        for (int k = K; k >= 1; --k) r[k] = rt.b[k - 1] / ((t - rt.a[k]) - rt.b[k] * r[k + 1]);
        return r;
    };
    int extra = 40;
    std::vector<double> r = ratios(k_max + extra);
    for (;;) {
        const std::vector<double> r2 = ratios(k_max + 2 * extra);
        double diff = 0.0;
        for (int k = 1; k <= k_max; ++k) diff = std::max(diff, std::abs(r2[k] - r[k]) / std::abs(r2[k]));
        r = r2;
        if (diff < 1e-15) break;
        extra *= 2;
        if (extra > 4000)
            fail(ErrorKind::numerical, "second-kind continued fraction did not converge for " + spec.describe());
    }
    std::vector<double> psi(k_max + 1);
    psi[0] = markov_transform(spec, t) / std::sqrt(spec.mass());
    for (int k = 1; k <= k_max; ++k) psi[k] = r[k] * psi[k - 1];
    return psi;
}

JacobiMatrix lanczos(std::span<const double> x, std::span<const double> w, int n)
{
    const std::size_t K = x.size();
    if (n < 1) return {};
    if (static_cast<std::size_t>(n) > K)
        fail(ErrorKind::degeneracy, "discrete measure has " + std::to_string(K) +
                                        " points; cannot build degree " + std::to_string(n) +
                                        " (raise the quadrature order or lower the degree)");
    Eigen::Map<const Eigen::VectorXd> X(x.data(), static_cast<Eigen::Index>(K));
    Eigen::VectorXd q(K);
    double wmax = 0.0;
    for (std::size_t i = 0; i < K; ++i) wmax = std::max(wmax, w[i]);
    for (std::size_t i = 0; i < K; ++i) {
        if (!(w[i] >= 0.0) || !std::isfinite(w[i])) fail(ErrorKind::numerical, "discrete weights must be finite and nonnegative");
        q[static_cast<Eigen::Index>(i)] = std::sqrt(w[i] / wmax);
    }
    q.normalize();
    Eigen::MatrixXd Q(static_cast<Eigen::Index>(K), n);
    JacobiMatrix J;
    J.a.resize(n);
    J.b.resize(n - 1);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    double beta = 0.0;
    for (int k = 0; k < n; ++k) {
        Q.col(k) = q;
        Eigen::VectorXd v = X.cwiseProduct(q) - beta * prev;
        const double alpha = q.dot(v);
        v -= alpha * q;
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd proj = Q.leftCols(k + 1).transpose() * v;
            v -= Q.leftCols(k + 1) * proj;
        }
        J.a[k] = alpha;
        if (k + 1 < n) {
            beta = v.norm();
            if (!(beta > 1e-14 * (X.cwiseAbs().maxCoeff() + 1e-300)))
                fail(ErrorKind::degeneracy, "Lanczos breakdown at step " + std::to_string(k + 1) +
                                                " (measure support too small for the requested degree)");
            J.b[k] = beta;
            prev = q;
            q = v / beta;
        }
    }
    return J;
}

std::vector<double> tridiagonal_eigenvalues(const JacobiMatrix& J)
{
    const auto n = static_cast<Eigen::Index>(J.a.size());
    if (n == 0) return {};
    if (n == 1) return {J.a[0]};
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(J.a.data(), n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(J.b.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "tridiagonal eigenvalue iteration failed");
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> varying_orthogonal_zeros(const Quadrature& quad, std::span<const double> weight_samples, int degree)
{
    if (weight_samples.size() != quad.size())
        fail(ErrorKind::validation, "weight samples must match the quadrature nodes");
    if (degree <= 0) return {};
    std::vector<double> w(quad.size());
    for (std::size_t i = 0; i < quad.size(); ++i) {
        if (!(weight_samples[i] > 0.0) || !std::isfinite(weight_samples[i]))
            fail(ErrorKind::validation, "varying weight must be strictly positive at every node");
        w[i] = quad.weights[i] * weight_samples[i];
    }
    auto z = tridiagonal_eigenvalues(lanczos(quad.nodes, w, degree));
    for (double& v : z) v = std::clamp(v, quad.interval.lo, quad.interval.hi);
    return z;
}

PolynomialRep varying_monic_orthogonal(const Quadrature& quad, std::span<const double> weight_samples, int degree)
{
    const auto z = varying_orthogonal_zeros(quad, weight_samples, degree);
    return PolynomialRep::from_roots(z, quad.interval);
}

PolynomialRep varying_monic_orthogonal_moments(const Quadrature& quad, std::span<const double> weight_samples,
                                               int degree)
{
    if (weight_samples.size() != quad.size())
        fail(ErrorKind::validation, "weight samples must match the quadrature nodes");
    if (degree <= 0) return PolynomialRep(quad.interval, {1.0});
    const auto K = static_cast<Eigen::Index>(quad.size());
    Eigen::MatrixXd T(degree + 1, K);
    for (Eigen::Index i = 0; i < K; ++i) {
        const double s = quad.interval.to_unit(quad.nodes[static_cast<std::size_t>(i)]);
        T(0, i) = 1.0;
        if (degree >= 1) T(1, i) = s;
        for (int k = 1; k < degree; ++k) T(k + 1, i) = 2.0 * s * T(k, i) - T(k - 1, i);
    }
    Eigen::VectorXd w(K);
    for (Eigen::Index i = 0; i < K; ++i)
        w[i] = quad.weights[static_cast<std::size_t>(i)] * weight_samples[static_cast<std::size_t>(i)];
    const Eigen::MatrixXd Tw = T.topRows(degree) * w.asDiagonal();
    const Eigen::MatrixXd G = Tw * T.topRows(degree).transpose();
    const Eigen::VectorXd g = Tw * T.row(degree).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (lu.rank() < degree)
        fail(ErrorKind::degeneracy, "moment Gram matrix is numerically singular at degree " + std::to_string(degree) +
                                        " (raise the quadrature order or lower the degree)");
    const Eigen::VectorXd c = lu.solve(-g);
    std::vector<double> coeffs(c.data(), c.data() + degree);
    coeffs.push_back(1.0);
    return PolynomialRep(quad.interval, std::move(coeffs)).monic();
}

} // namespace fpade

// SPDX-License-Identifier: Apache-2.0

#include "udn/quadrature.hpp"
#include "udn/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>

namespace udn {

QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b, double tol)
{
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, /*max_depth=*/18, /*rel_tol=*/tol, &err);
    if (!std::isfinite(value) || err > tol * std::max(1.0, std::abs(value)) * 50.0)
        throw QuadratureFailure("adaptive quadrature stalled: estimate " +
                                std::to_string(value) + ", error " + std::to_string(err));
    return {value, err};
}

QuadratureResult integrate_to_inf(const std::function<double(double)>& f,
                                  double a, double tol)
{
    // exp_sinh expects integrands on (0, inf); shift the origin.
    boost::math::quadrature::exp_sinh<double> rule;
    double err = 0.0, l1 = 0.0;
    const double value = rule.integrate([&](double t) { return f(a + t); },
                                        tol, &err, &l1);
    if (!std::isfinite(value))
        throw QuadratureFailure("semi-infinite quadrature produced a non-finite value");
    return {value, err * l1};
}

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of
// the monic orthogonal-polynomial recurrence, weights mu0 * v0^2.
GaussRule golub_welsch(const std::vector<double>& diag,
                       const std::vector<double>& offdiag, double mu0)
{
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        jacobi(i, i) = diag[i];
        if (i + 1 < n) {
            jacobi(i, i + 1) = offdiag[i];
            jacobi(i + 1, i) = offdiag[i];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

const GaussRule& cached_rule(std::map<int, GaussRule>& cache, std::mutex& mtx,
                             int n, GaussRule (*make)(int))
{
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, make(n)).first;
    return it->second;
}

GaussRule make_laguerre(int n)
{
    std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k)
        diag[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k)
        off[k - 1] = k; // sqrt(b_k) with b_k = k^2
    return golub_welsch(diag, off, 1.0);
}

GaussRule make_hermite(int n)
{
    std::vector<double> diag(n, 0.0), off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k)
        off[k - 1] = std::sqrt(k / 2.0);
    return golub_welsch(diag, off, std::sqrt(std::acos(-1.0)));
}

} // namespace

const GaussRule& gauss_laguerre(int n)
{
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    return cached_rule(cache, mtx, n, &make_laguerre);
}

const GaussRule& gauss_hermite(int n)
{
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    return cached_rule(cache, mtx, n, &make_hermite);
}

const GaussRule& gauss_legendre_16()
{
    static const GaussRule rule = [] {
        using boost_rule = boost::math::quadrature::gauss<double, 16>;
        GaussRule r;
        // boost stores the non-negative half of the symmetric rule.
        const auto& abscissa = boost_rule::abscissa();
        const auto& weights = boost_rule::weights();
        for (std::size_t i = abscissa.size(); i-- > 0;) {
            if (abscissa[i] > 0.0) {
                r.nodes.push_back(-abscissa[i]);
                r.weights.push_back(weights[i]);
            }
        }
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            r.nodes.push_back(abscissa[i]);
            r.weights.push_back(weights[i]);
        }
        return r;
    }();
    return rule;
}

} // namespace udn

#include "aspectra/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "aspectra/error.hpp"

namespace aspectra {
namespace {

constexpr double kConvergence = 1e-10;
constexpr std::size_t kMaxSweeps = 100000;
constexpr double kBisectionTolerance = 1e-6;
constexpr int kMaxBisections = 200;

double soft_threshold(double v, double t) noexcept {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

double residual_norm(const ReplacementMatrix& x, std::span<const double> ym, std::span<const double> gamma) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < x.aspects(); ++j) {
            if (x.at(i, j)) pred += gamma[j];
        }
        rss += (ym[i] - pred) * (ym[i] - pred);
    }
    return std::sqrt(rss);
}

}  // namespace

std::vector<double> lasso_coordinate_descent(const SquareMatrix& w, std::span<const double> z, std::size_t n,
                                             double lambda) {
    const std::size_t m = w.size();
    const auto scale = static_cast<double>(n);
    std::vector<double> beta(m, 0.0);
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (w(j, j) == 0.0) continue;
            double partial = z[j];
            for (std::size_t k = 0; k < m; ++k) {
                if (k != j) partial -= w(j, k) * beta[k];
            }
            const double updated = soft_threshold(partial / scale, lambda) / (w(j, j) / scale);
            max_change = std::max(max_change, std::abs(updated - beta[j]));
            beta[j] = updated;
        }
        if (max_change < kConvergence) break;
    }
    return beta;
}

std::size_t count_nonzero(std::span<const double> v) noexcept {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

LassoFit fit_lasso(const ReplacementMatrix& x, std::span<const double> ym, std::size_t limit,
                   std::span<const std::string> names) {
    const std::size_t m = x.aspects();
    if (limit > m) {
        throw Error(Errc::InvalidArgument, "limit " + std::to_string(limit) + " exceeds the " + std::to_string(m) +
                                               " aspects");
    }
    LassoFit out;
    if (limit == m) {
        out.fit = fit_ols(x, ym, names);
        double zmax = 0.0;
        for (double v : out.fit.z) zmax = std::max(zmax, std::abs(v));
        out.lambda_max = zmax / static_cast<double>(x.rows());
        out.lambda = 0.0;
        out.trace.push_back({0.0, count_nonzero(out.fit.gamma)});
        return out;
    }

    out.fit.w = replacement_gram(x);
    out.fit.z = replacement_cross(x, ym);
    const std::size_t n = x.rows();
    double zmax = 0.0;
    for (double v : out.fit.z) zmax = std::max(zmax, std::abs(v));
    out.lambda_max = zmax / static_cast<double>(n);

    auto solve = [&](double lambda) {
        auto beta = lasso_coordinate_descent(out.fit.w, out.fit.z, n, lambda);
        out.trace.push_back({lambda, count_nonzero(beta)});
        return beta;
    };

    std::vector<double> best(m, 0.0);
    double lo = 0.0;
    double hi = out.lambda_max;
    if (limit > 0) {
        auto unpenalized = solve(0.0);
        if (count_nonzero(unpenalized) <= limit) {
            best = std::move(unpenalized);
            hi = 0.0;
        }
    }
    if (limit > 0 && hi > 0.0) {
        // Invariant: solution at hi satisfies the limit, solution at lo does not.
        for (int it = 0; it < kMaxBisections; ++it) {
            const double gap = hi - lo;
            if (gap <= kBisectionTolerance * out.lambda_max && gap <= kBisectionTolerance * hi) break;
            const double mid = lo + 0.5 * gap;
            auto beta = solve(mid);
            if (count_nonzero(beta) <= limit) {
                hi = mid;
                best = std::move(beta);
            } else {
                lo = mid;
            }
        }
    }
    out.lambda = hi;
    out.fit.gamma = std::move(best);
    out.fit.residual_norm = residual_norm(x, ym, out.fit.gamma);
    return out;
}

LassoFit fit_lasso(const SampleDesign& design, const DeltaPredictions& ym, std::size_t limit) {
    std::vector<std::string> names;
    for (const auto& g : design.partition.groups) names.push_back(g.name);
    return fit_lasso(design.x_prime, ym.values, limit, names);
}

}  // namespace aspectra

#include "aspectra/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aspectra/error.hpp"

namespace aspectra {

std::string_view to_string(CorrelationMethod method) noexcept {
    return method == CorrelationMethod::Pearson ? "pearson" : "spearman";
}

CorrelationMethod parse_correlation_method(std::string_view text) {
    if (text == "pearson") return CorrelationMethod::Pearson;
    if (text == "spearman") return CorrelationMethod::Spearman;
    throw Error(Errc::InvalidArgument, "unknown correlation method '" + std::string(text) + "'");
}

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && x[order[j]] == x[order[i]]) ++j;
        // positions i..j-1 (0-based) share ranks i+1..j
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mid;
        i = j;
    }
    return ranks;
}

CorrelationMatrix correlation_matrix(const NumericTable& table, CorrelationMethod method) {
    const std::size_t n = table.rows();
    const std::size_t p = table.cols();

    // Centered, unit-norm columns; r(i, j) is then a plain dot product.
    std::vector<std::vector<double>> unit(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto col = table.column(j);
        if (method == CorrelationMethod::Spearman) col = average_ranks(col);
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (auto& v : col) {
            v -= mean;
            ss += v * v;
        }
        const bool constant = std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; });
        if (constant || ss <= 0.0) throw Error(Errc::ZeroVarianceColumn, table.column_name(j));
        const double norm = std::sqrt(ss);
        for (auto& v : col) v /= norm;
        unit[j] = std::move(col);
    }

    CorrelationMatrix out{SquareMatrix(p, 1.0), method};
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i) r += unit[a][i] * unit[b][i];
            r = std::clamp(r, -1.0, 1.0);
            out.values(a, b) = r;
            out.values(b, a) = r;
        }
    }
    return out;
}

double correlation(std::span<const double> x, std::span<const double> y, CorrelationMethod method) {
    if (x.size() != y.size() || x.empty()) {
        throw Error(Errc::LengthMismatch, "correlation of vectors with lengths " + std::to_string(x.size()) +
                                              " and " + std::to_string(y.size()));
    }
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> b(y.begin(), y.end());
    if (method == CorrelationMethod::Spearman) {
        a = average_ranks(a);
        b = average_ranks(b);
    }
    const auto n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    const bool const_a = std::all_of(a.begin(), a.end(), [&](double v) { return v == a[0]; });
    const bool const_b = std::all_of(b.begin(), b.end(), [&](double v) { return v == b[0]; });
    if (const_a || const_b || saa <= 0.0 || sbb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

SquareMatrix cor_distance(const CorrelationMatrix& corr) {
    const std::size_t p = corr.size();
    SquareMatrix d(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b) {
            if (a != b) d(a, b) = 1.0 - std::abs(corr(a, b));
        }
    }
    return d;
}

}  // namespace aspectra

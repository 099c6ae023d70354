#include "aspectra/aspect_importance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "aspectra/clustering.hpp"
#include "aspectra/error.hpp"
#include "aspectra/lasso.hpp"
#include "aspectra/sampling.hpp"

namespace aspectra {
namespace {

constexpr std::uint64_t kAspectStream = 0xA59EC7;

std::string aspect_label(std::span<const std::string> names, std::size_t j) {
    return j < names.size() ? "'" + names[j] + "'" : "#" + std::to_string(j);
}

}  // namespace

std::size_t ReplacementMatrix::row_count(std::size_t i) const noexcept {
    std::size_t c = 0;
    for (std::size_t j = 0; j < cols_; ++j) c += flags_[i * cols_ + j];
    return c;
}

SampleDesign build_design(const NumericTable& table, const Observation& x_star, const AspectPartition& partition,
                          std::size_t N, RngStream rng) {
    const std::size_t p = table.cols();
    if (x_star.size() != p) {
        throw Error(Errc::LengthMismatch, "observation has " + std::to_string(x_star.size()) + " values, table has " +
                                              std::to_string(p) + " columns");
    }
    const auto owner = group_of_column(partition, p);
    const std::size_t m = partition.size();
    if (N < m) {
        throw Error(Errc::InvalidArgument, "N = " + std::to_string(N) + " is smaller than the number of aspects (" +
                                               std::to_string(m) + ")");
    }

    RngStream row_rng = rng.substream(0);
    RngStream flag_rng = rng.substream(1);
    auto row_ids = sample_row_ids(table.rows(), N, row_rng);

    ReplacementMatrix x(N, m);
    for (std::size_t i = 0; i < N; ++i) {
        const auto k = static_cast<std::size_t>(flag_rng.uniform_index(m));
        const auto l = static_cast<std::size_t>(flag_rng.uniform_index(m));
        x.set(i, k);
        x.set(i, l);
    }

    NumericTable a = table.select_rows(row_ids);
    const auto src = a.values();
    std::vector<double> modified(src.begin(), src.end());
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            if (x.at(i, owner[j])) modified[i * p + j] = x_star[j];
        }
    }
    NumericTable a_prime(table.column_names(), std::move(modified));
    return SampleDesign{partition, std::move(row_ids), std::move(x), std::move(a), std::move(a_prime)};
}

DeltaPredictions delta_predictions(const Model& model, const SampleDesign& design) {
    const auto modified = predict(model, design.a_prime);
    const auto original = predict(model, design.a);
    DeltaPredictions out;
    out.values.resize(modified.size());
    for (std::size_t i = 0; i < modified.size(); ++i) out.values[i] = modified[i] - original[i];
    return out;
}

SquareMatrix replacement_gram(const ReplacementMatrix& x) {
    const std::size_t m = x.aspects();
    std::vector<long long> counts(m * m, 0);
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        flagged.clear();
        for (std::size_t j = 0; j < m; ++j) {
            if (x.at(i, j)) flagged.push_back(j);
        }
        for (std::size_t a : flagged) {
            for (std::size_t b : flagged) ++counts[a * m + b];
        }
    }
    SquareMatrix w(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) w(a, b) = static_cast<double>(counts[a * m + b]);
    }
    return w;
}

std::vector<double> replacement_cross(const ReplacementMatrix& x, std::span<const double> ym) {
    if (ym.size() != x.rows()) {
        throw Error(Errc::LengthMismatch, std::to_string(ym.size()) + " prediction differences for " +
                                              std::to_string(x.rows()) + " design rows");
    }
    std::vector<double> z(x.aspects(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.aspects(); ++j) {
            if (x.at(i, j)) z[j] += ym[i];
        }
    }
    return z;
}

SurrogateFit fit_ols(const ReplacementMatrix& x, std::span<const double> ym, std::span<const std::string> names) {
    const std::size_t m = x.aspects();
    SurrogateFit fit;
    fit.w = replacement_gram(x);
    fit.z = replacement_cross(x, ym);

    std::string never;
    for (std::size_t j = 0; j < m; ++j) {
        if (fit.w(j, j) == 0.0) never += (never.empty() ? "" : ", ") + aspect_label(names, j);
    }
    if (!never.empty()) {
        throw Error(Errc::SingularDesign, "aspects never sampled: " + never + "; increase N");
    }

    const auto em = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd w(em, em);
    Eigen::VectorXd z(em);
    for (std::size_t a = 0; a < m; ++a) {
        z(static_cast<Eigen::Index>(a)) = fit.z[a];
        for (std::size_t b = 0; b < m; ++b) w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = fit.w(a, b);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w);
    qr.setThreshold(1e-10);
    if (qr.rank() < em) {
        throw Error(Errc::SingularDesign, "replacement design is collinear (rank " + std::to_string(qr.rank()) +
                                              " of " + std::to_string(m) + "); increase N");
    }
    const Eigen::VectorXd gamma = qr.solve(z);
    fit.gamma.assign(gamma.data(), gamma.data() + m);

    double rss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double pred = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (x.at(i, j)) pred += fit.gamma[j];
        }
        rss += (ym[i] - pred) * (ym[i] - pred);
    }
    fit.residual_norm = std::sqrt(rss);
    return fit;
}

namespace {

std::vector<std::string> aspect_names(const AspectPartition& partition) {
    std::vector<std::string> names;
    names.reserve(partition.size());
    for (const auto& g : partition.groups) names.push_back(g.name);
    return names;
}

void annotate_correlations(const NumericTable& table, CorrelationMethod method, AspectContribution& aspect) {
    aspect.min_abs_cor = 1.0;
    aspect.sign_consistent = true;
    bool seen_pos = false, seen_neg = false;
    for (std::size_t a = 0; a < aspect.members.size(); ++a) {
        const auto xa = table.column(aspect.members[a]);
        for (std::size_t b = a + 1; b < aspect.members.size(); ++b) {
            const double r = correlation(xa, table.column(aspect.members[b]), method);
            if (std::isnan(r)) {
                // Undefined for a constant column: report no evidence of correlation.
                aspect.min_abs_cor = 0.0;
                aspect.sign_consistent = false;
                return;
            }
            aspect.min_abs_cor = std::min(aspect.min_abs_cor, std::abs(r));
            seen_pos |= r > 0.0;
            seen_neg |= r < 0.0;
        }
    }
    aspect.sign_consistent = !(seen_pos && seen_neg);
}

}  // namespace

SurrogateFit fit_ols(const SampleDesign& design, const DeltaPredictions& ym) {
    const auto names = aspect_names(design.partition);
    return fit_ols(design.x_prime, ym.values, names);
}

RngStream aspect_stream(std::uint64_t seed) { return RngStream(seed, kAspectStream); }

AspectExplanation predict_aspects(const Model& model, const NumericTable& table, const Observation& x_star,
                                  const Grouping& grouping, const PredictAspectsOptions& options) {
    const AspectPartition partition = std::holds_alternative<AspectPartition>(grouping)
                                          ? std::get<AspectPartition>(grouping)
                                          : group_variables(table, std::get<double>(grouping), options.method);
    validate_partition(partition, table.cols());
    if (options.limit && *options.limit > partition.size()) {
        throw Error(Errc::InvalidArgument, "limit " + std::to_string(*options.limit) + " exceeds the " +
                                               std::to_string(partition.size()) + " aspects");
    }

    const auto design = build_design(table, x_star, partition, options.N, aspect_stream(options.seed));
    const auto ym = delta_predictions(model, design);

    AspectExplanation out;
    out.column_names = table.column_names();
    out.observation.assign(x_star.values().begin(), x_star.values().end());
    out.N = options.N;
    out.seed = options.seed;
    out.method = options.method;
    out.limit = options.limit;

    std::vector<double> gamma;
    if (options.limit) {
        auto lasso = fit_lasso(design, ym, *options.limit);
        gamma = std::move(lasso.fit.gamma);
        out.lambda = lasso.lambda;
    } else {
        gamma = fit_ols(design, ym).gamma;
    }

    for (std::size_t g = 0; g < partition.size(); ++g) {
        AspectContribution c;
        c.name = partition.groups[g].name;
        c.members = partition.groups[g].members;
        c.contribution = gamma[g];
        annotate_correlations(table, options.method, c);
        out.aspects.push_back(std::move(c));
    }
    std::stable_sort(out.aspects.begin(), out.aspects.end(), [](const auto& a, const auto& b) {
        return std::abs(a.contribution) > std::abs(b.contribution);
    });
    return out;
}

}  // namespace aspectra

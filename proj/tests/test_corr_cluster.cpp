#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "aspectra/clustering.hpp"
#include "aspectra/correlation.hpp"
#include "aspectra/csv.hpp"
#include "aspectra/error.hpp"

using namespace aspectra;

namespace {

NumericTable two_columns(std::vector<double> x, std::vector<double> y) {
    std::vector<double> v;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v.push_back(x[i]);
        v.push_back(y[i]);
    }
    return NumericTable({"x", "y"}, v);
}

SquareMatrix random_distance(std::size_t p, RngStream& rng, bool coarse) {
    SquareMatrix d(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            // Coarse values give exact ties and exercise the tie rule. Average
            // linkage averages in a different order than the oracle, so tied
            // means can round apart; it gets continuous values instead.
            const double v = coarse ? static_cast<double>(rng.uniform_index(12)) / 12.0 : rng.uniform01();
            d(a, b) = d(b, a) = v;
        }
    }
    return d;
}

oracle::Matrix to_rows(const SquareMatrix& m) {
    oracle::Matrix out(m.size(), std::vector<double>(m.size()));
    for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = 0; b < m.size(); ++b) out[a][b] = m(a, b);
    }
    return out;
}

std::set<std::vector<std::size_t>> as_sets(const AspectPartition& p) {
    std::set<std::vector<std::size_t>> out;
    for (const auto& g : p.groups) {
        auto m = g.members;
        std::sort(m.begin(), m.end());
        out.insert(m);
    }
    return out;
}

}  // namespace

TEST_CASE("correlation_matrix exact dependence") {
    CHECK(correlation_matrix(two_columns({1, 2, 3}, {2, 4, 6}), CorrelationMethod::Pearson)(0, 1) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(correlation_matrix(two_columns({1, 2, 3}, {6, 4, 2}), CorrelationMethod::Pearson)(0, 1) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(correlation_matrix(two_columns({1, 2, 3}, {1, 8, 27}), CorrelationMethod::Spearman)(0, 1) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("correlation_matrix matches the textbook oracle on Gaussian data") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto t = oracle::gaussian_table(50, 4, RngStream(seed, 10));
        const auto pearson = correlation_matrix(t, CorrelationMethod::Pearson);
        const auto spearman = correlation_matrix(t, CorrelationMethod::Spearman);
        for (std::size_t a = 0; a < 4; ++a) {
            CHECK(pearson(a, a) == 1.0);
            for (std::size_t b = 0; b < 4; ++b) {
                CHECK(pearson(a, b) == pearson(b, a));
                if (a == b) continue;
                CHECK(std::abs(pearson(a, b) - oracle::textbook_pearson(t.column(a), t.column(b))) < 1e-12);
                CHECK(std::abs(spearman(a, b) - oracle::textbook_spearman(t.column(a), t.column(b))) < 1e-12);
            }
        }
    }
}

TEST_CASE("spearman uses mid-ranks for ties") {
    const std::vector<double> x{3, 1, 3, 2, 3};
    CHECK(average_ranks(x) == std::vector<double>{4, 1, 4, 2, 4});
    CHECK(average_ranks(x) == oracle::naive_ranks(x));
    const std::vector<double> y{1, 2, 2, 5, 0};
    const auto c = correlation_matrix(two_columns(x, y), CorrelationMethod::Spearman);
    CHECK(std::abs(c(0, 1) - oracle::textbook_spearman(x, y)) < 1e-12);
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
    RngStream rng(3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = oracle::gaussian_table(30, 2, rng.substream(trial));
        std::vector<double> v(t.values().begin(), t.values().end());
        for (std::size_t i = 0; i < t.rows(); ++i) {
            v[i * 2] = std::exp(v[i * 2]);
            v[i * 2 + 1] = v[i * 2 + 1] * v[i * 2 + 1] * v[i * 2 + 1] + 5.0;
        }
        const NumericTable u(t.column_names(), v);
        CHECK(correlation_matrix(t, CorrelationMethod::Spearman)(0, 1) ==
              correlation_matrix(u, CorrelationMethod::Spearman)(0, 1));
    }
}

TEST_CASE("zero-variance columns are rejected") {
    try {
        correlation_matrix(NumericTable({"a", "b"}, {1, 5, 2, 5, 3, 5}), CorrelationMethod::Pearson);
        FAIL("expected ZeroVarianceColumn");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ZeroVarianceColumn);
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
    CHECK(std::isnan(correlation(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}, CorrelationMethod::Pearson)));
}

TEST_CASE("cor_distance examples and range") {
    CorrelationMatrix c{SquareMatrix(3, 1.0), CorrelationMethod::Pearson};
    c.values(0, 1) = c.values(1, 0) = -0.95;
    c.values(0, 2) = c.values(2, 0) = 0.0;
    c.values(1, 2) = c.values(2, 1) = 1.0;
    const auto d = cor_distance(c);
    CHECK(d(0, 0) == 0.0);
    CHECK(d(0, 1) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d(0, 2) == 1.0);
    CHECK(d(1, 2) == 0.0);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = oracle::gaussian_table(20, 5, RngStream(seed, 4));
        const auto dd = cor_distance(correlation_matrix(t, CorrelationMethod::Spearman));
        for (std::size_t a = 0; a < 5; ++a) {
            CHECK(dd(a, a) == 0.0);
            for (std::size_t b = 0; b < 5; ++b) {
                CHECK(dd(a, b) >= 0.0);
                CHECK(dd(a, b) <= 1.0);
                CHECK(dd(a, b) == dd(b, a));
            }
        }
    }
}

TEST_CASE("agglomerative small cases") {
    SquareMatrix d2(2, 0.0);
    d2(0, 1) = d2(1, 0) = 0.3;
    const auto t2 = agglomerative(d2, Linkage::Complete);
    REQUIRE(t2.merges().size() == 1);
    CHECK(t2.merges()[0].height == 0.3);

    SquareMatrix d3(3, 0.0);
    d3(0, 1) = d3(1, 0) = 0.1;
    d3(0, 2) = d3(2, 0) = d3(1, 2) = d3(2, 1) = 0.9;
    const auto t3 = agglomerative(d3, Linkage::Complete);
    REQUIRE(t3.merges().size() == 2);
    CHECK(t3.merges()[0].members == std::vector<std::size_t>{0, 1});
    CHECK(t3.merges()[0].height == 0.1);
    CHECK(t3.merges()[1].members == std::vector<std::size_t>{0, 1, 2});
    CHECK(t3.merges()[1].height == 0.9);
    CHECK(t3.merges()[1].left == 2);
    CHECK(t3.merges()[1].right == 3);

    const std::vector<std::string> names{"a", "b", "c"};
    CHECK(cut_tree(t3, 0.0, names).size() == 3);
    CHECK(cut_tree(t3, 1.0, names).size() == 1);
    const auto mid = cut_tree(t3, 0.5, names);
    REQUIRE(mid.size() == 2);
    CHECK(mid.groups[0].members == std::vector<std::size_t>{0, 1});
    CHECK(mid.groups[0].name == "a_b");
    CHECK(mid.groups[1].members == std::vector<std::size_t>{2});

    const auto t1 = agglomerative(SquareMatrix(1, 0.0), Linkage::Complete);
    CHECK(t1.merges().empty());
    CHECK(t1.leaf_order() == std::vector<std::size_t>{0});
}

TEST_CASE("agglomerative equals the brute-force clusterer on random 8-variable matrices") {
    RngStream rng(99, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto coarse = random_distance(8, rng, true);
        const auto fine = random_distance(8, rng, false);
        for (auto [link, ref] : {std::pair{Linkage::Complete, oracle::Link::Complete},
                                 std::pair{Linkage::Single, oracle::Link::Single},
                                 std::pair{Linkage::Average, oracle::Link::Average}}) {
            INFO("linkage " << to_string(link) << " trial " << trial);
            const auto& d = link == Linkage::Average ? fine : coarse;
            const auto tree = agglomerative(d, link);
            const auto expected = oracle::brute_force_cluster(to_rows(d), ref);
            REQUIRE(tree.merges().size() == expected.size());
            for (std::size_t t = 0; t < expected.size(); ++t) {
                const auto& m = tree.merges()[t];
                CHECK(m.left == expected[t].left);
                CHECK(m.right == expected[t].right);
                CHECK(m.members == expected[t].members);
                CHECK(std::abs(m.height - expected[t].height) < 1e-12);
            }
        }
    }
}

TEST_CASE("complete linkage height equals 1 - min within-cluster |r|") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto t = oracle::gaussian_table(40, 7, RngStream(seed, 21));
        const auto c = correlation_matrix(t, CorrelationMethod::Pearson);
        const auto tree = agglomerative(cor_distance(c), Linkage::Complete);
        for (std::size_t k = 0; k < tree.merges().size(); ++k) {
            const auto& m = tree.merges()[k];
            if (k > 0) CHECK(m.height >= tree.merges()[k - 1].height);
            double min_r = 1.0;
            for (std::size_t a : m.members) {
                for (std::size_t b : m.members) min_r = std::min(min_r, std::abs(c(a, b)));
            }
            CHECK(std::abs((1.0 - min_r) - m.height) < 1e-12);
        }
        CHECK(tree.merges().back().members.size() == 7);
    }
}

TEST_CASE("cut_tree boundary behaviour") {
    const auto t = oracle::gaussian_table(30, 6, RngStream(4, 4));
    const auto tree = agglomerative(cor_distance(correlation_matrix(t, CorrelationMethod::Spearman)), Linkage::Complete);
    const double first = tree.merges().front().height;
    CHECK(cut_tree(tree, std::nextafter(first, -1.0), t.column_names()).size() == 6);
    CHECK(cut_tree(tree, tree.merges().back().height, t.column_names()).size() == 1);
    for (std::size_t s = 0; s <= 5; ++s) CHECK(cut_after_merges(tree, s, t.column_names()).size() == 6 - s);
}

TEST_CASE("MergeTree rejects malformed merges") {
    CHECK_THROWS_AS(MergeTree(2, {}), Error);
    CHECK_THROWS_AS(MergeTree(2, {Merge{0, 0, 0.1, {0}}}), Error);
    CHECK_THROWS_AS(MergeTree(3, {Merge{0, 1, 0.5, {0, 1}}, Merge{3, 2, 0.2, {0, 1, 2}}}), Error);
    CHECK_THROWS_AS(MergeTree(2, {Merge{0, 1, 0.5, {0}}}), Error);
    CHECK_NOTHROW(MergeTree(3, {Merge{0, 2, 0.2, {0, 2}}, Merge{1, 3, 0.4, {0, 1, 2}}}));
}

TEST_CASE("group_variables examples") {
    const auto t = oracle::gaussian_table(60, 5, RngStream(1, 2));
    CHECK(group_variables(t, 0.0).size() == 1);

    const auto dup = load_table(oracle::data_file("duplicate_columns.csv"));
    const auto g = group_variables(dup.table, 0.99);
    REQUIRE(g.size() == 2);
    CHECK(g.groups[0].members == std::vector<std::size_t>{0, 1});
    CHECK(g.groups[0].name == "dup1_dup2");
    CHECK(g.groups[1].members == std::vector<std::size_t>{2});
    CHECK_THROWS_AS(group_variables(t, 1.5), Error);
}

TEST_CASE("group_variables groups pass the all-pairs cutoff check") {
    RngStream rng(17, 0);
    for (int trial = 0; trial < 100; ++trial) {
        // Correlated Gaussian columns: shared latent factors give some structure.
        const auto base = oracle::gaussian_table(60, 11, rng.substream(trial));
        std::vector<double> v;
        for (std::size_t i = 0; i < base.rows(); ++i) {
            for (std::size_t j = 0; j < 8; ++j) v.push_back(base.at(i, j) + 1.2 * base.at(i, 8 + j % 3));
        }
        std::vector<std::string> names;
        for (int j = 0; j < 8; ++j) names.push_back("v" + std::to_string(j));
        const NumericTable t(names, v);
        for (auto method : {CorrelationMethod::Pearson, CorrelationMethod::Spearman}) {
            for (double cutoff : {0.3, 0.5, 0.7}) {
                const auto groups = group_variables(t, cutoff, method);
                validate_partition(groups, 8);
                for (const auto& g : groups.groups) {
                    for (std::size_t a : g.members) {
                        for (std::size_t b : g.members) {
                            if (a == b) continue;
                            const double r = method == CorrelationMethod::Pearson
                                                 ? oracle::textbook_pearson(t.column(a), t.column(b))
                                                 : oracle::textbook_spearman(t.column(a), t.column(b));
                            CHECK(std::abs(r) >= cutoff - 1e-12);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("group_variables is invariant under column permutation") {
    RngStream rng(5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto base = oracle::gaussian_table(50, 9, rng.substream(trial));
        std::vector<double> v;
        for (std::size_t i = 0; i < base.rows(); ++i) {
            for (std::size_t j = 0; j < 6; ++j) v.push_back(base.at(i, j) + base.at(i, 6 + j % 3));
        }
        const NumericTable t({"a", "b", "c", "d", "e", "f"}, v);
        const std::vector<std::size_t> perm{3, 5, 0, 2, 4, 1};
        std::vector<double> pv;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t j : perm) pv.push_back(t.at(i, j));
        }
        const NumericTable u({"d", "f", "a", "c", "e", "b"}, pv);
        for (double cutoff : {0.3, 0.5, 0.7}) {
            std::set<std::set<std::string>> lhs, rhs;
            for (const auto& g : group_variables(t, cutoff).groups) {
                std::set<std::string> s;
                for (auto j : g.members) s.insert(t.column_name(j));
                lhs.insert(s);
            }
            for (const auto& g : group_variables(u, cutoff).groups) {
                std::set<std::string> s;
                for (auto j : g.members) s.insert(u.column_name(j));
                rhs.insert(s);
            }
            CHECK(lhs == rhs);
        }
    }
}

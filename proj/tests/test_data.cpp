#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace hiercls;
using namespace hiercls::testing;

TEST_CASE("synthetic tree sizes") {
    SynthConfig cfg;
    cfg.depth = 1;
    cfg.branching = 2;
    cfg.samples_per_leaf = 10;
    cfg.dim = 3;
    auto small = generate_synthetic(cfg);
    CHECK(small.hierarchy.size() == 3);
    CHECK(small.hierarchy.labeled().size() == 2);
    CHECK(small.dataset.size() == 20);

    cfg.depth = 3;
    auto big = generate_synthetic(cfg);
    CHECK(big.hierarchy.size() == 15);
    CHECK(big.hierarchy.labeled().size() == 8);
    CHECK(big.hierarchy.roots().size() == 1);
    for (NodeId c : big.hierarchy.labeled()) CHECK(big.hierarchy.is_leaf(c));
    CHECK(big.hierarchy.contains("root.1.0.1"));
}

TEST_CASE("synthetic generation is deterministic") {
    SynthConfig cfg;
    cfg.depth = 2;
    cfg.samples_per_leaf = 5;
    cfg.seed = 11;
    const auto a = generate_synthetic(cfg);
    const auto b = generate_synthetic(cfg);
    CHECK(a.dataset.features == b.dataset.features);
    CHECK(a.dataset.labels == b.dataset.labels);
    cfg.seed = 12;
    CHECK(generate_synthetic(cfg).dataset.features != a.dataset.features);
}

TEST_CASE("invalid synthetic configs") {
    SynthConfig cfg;
    cfg.depth = 0;
    CHECK_THROWS_AS(generate_synthetic(cfg), InvalidConfig);
    cfg = {};
    cfg.branching = 1;
    CHECK_THROWS_AS(generate_synthetic(cfg), InvalidConfig);
    cfg = {};
    cfg.sigma_obs = 0.0;
    CHECK_THROWS_AS(generate_synthetic(cfg), InvalidConfig);
}

TEST_CASE("leaf means are hierarchically clustered") {
    // Averaged over seeds: leaves sharing a level-1 ancestor sit closer
    // together than leaves under different level-1 ancestors.
    SynthConfig cfg;
    cfg.depth = 3;
    cfg.branching = 2;
    cfg.dim = 16;
    double within = 0.0, across = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        const auto means = synthetic_leaf_means(cfg);
        REQUIRE(means.size() == 8);
        // leaves 0..3 descend from root.0, 4..7 from root.1
        within += (means[0] - means[2]).norm() + (means[4] - means[6]).norm();
        across += (means[0] - means[4]).norm() + (means[2] - means[6]).norm();
    }
    CHECK(within < across);

    double siblings = 0.0, cousins = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        const auto means = synthetic_leaf_means(cfg);
        siblings += (means[0] - means[1]).norm();
        cousins += (means[0] - means[2]).norm();
    }
    CHECK(siblings < cousins);
}

TEST_CASE("standardize") {
    Dataset ds;
    ds.features.resize(2, 2);
    ds.features << 0.0, 5.0, 2.0, 5.0;
    ds.labels = {NodeId{0}, NodeId{0}};
    const auto st = standardize(ds);
    // population convention: mean 1, stddev 1
    CHECK(st.features(0, 0) == -1.0);
    CHECK(st.features(1, 0) == 1.0);
    CHECK(st.standardization.scale[0] == 1.0);
    // constant column: centered, scale untouched
    CHECK(st.features(0, 1) == 0.0);
    CHECK(st.standardization.scale[1] == 1.0);
    CHECK(st.standardization.mean[1] == 5.0);

    SynthConfig cfg;
    cfg.depth = 2;
    cfg.samples_per_leaf = 20;
    auto synth = standardize(generate_synthetic(cfg).dataset);
    const auto again = standardize(synth);
    CHECK((again.features - synth.features).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::RowVectorXd mean = synth.features.colwise().mean();
    CHECK(mean.cwiseAbs().maxCoeff() < 1e-12);

    Dataset empty;
    CHECK_THROWS_AS(standardize(empty), EmptyDataset);
}

TEST_CASE("stratified split is an exact partition") {
    SynthConfig cfg;
    cfg.depth = 2;
    cfg.branching = 3;
    cfg.samples_per_leaf = 11;
    const auto synth = generate_synthetic(cfg);
    const auto [train, val] = split_stratified(synth.dataset, 0.5, 3);
    CHECK(train.size() + val.size() == synth.dataset.size());
    for (NodeId c : synth.hierarchy.labeled()) {
        const auto n_val = std::count(val.labels.begin(), val.labels.end(), c);
        const auto n_train = std::count(train.labels.begin(), train.labels.end(), c);
        CHECK(n_val + n_train == 11);
        CHECK(std::abs(n_val - n_train) <= 1);
    }
    // every original row appears exactly once
    std::multiset<std::vector<double>> rows, split_rows;
    auto collect = [](const Dataset& d, auto& into) {
        for (Eigen::Index i = 0; i < d.features.rows(); ++i) {
            const Eigen::RowVectorXd r = d.features.row(i);
            into.insert(std::vector<double>(r.data(), r.data() + r.size()));
        }
    };
    collect(synth.dataset, rows);
    collect(train, split_rows);
    collect(val, split_rows);
    CHECK(rows == split_rows);
}

TEST_CASE("dataset csv") {
    const auto h = toy1().build();
    const std::string text = "f0,f1,label\n0.5,1,corgi\n-2,3.25,car\n1e-3,0,bus\n";
    std::istringstream in(text);
    const auto ds = read_dataset(in, h);
    CHECK(ds.size() == 3);
    CHECK(ds.dim() == 2);
    CHECK(ds.labels[1] == h.id("car"));
    CHECK(ds.features(2, 0) == 1e-3);

    std::ostringstream out;
    write_dataset(out, ds, h);
    std::istringstream again(out.str());
    const auto back = read_dataset(again, h);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);

    SUBCASE("unknown label") {
        std::istringstream bad("f0,label\n1,corgi\n2,plane\n");
        try {
            read_dataset(bad, h);
            FAIL("expected LabelNotInHierarchy");
        } catch (const LabelNotInHierarchy& e) {
            CHECK(e.row() == 2);
        }
    }
    SUBCASE("inner node is not a class") {
        std::istringstream bad("f0,label\n1,dog\n");
        CHECK_THROWS_AS(read_dataset(bad, h), LabelNotInHierarchy);
    }
    SUBCASE("wrong column count") {
        std::istringstream bad("f0,f1,label\n1,2,corgi\n1,corgi\n");
        try {
            read_dataset(bad, h);
            FAIL("expected DimensionMismatch");
        } catch (const DimensionMismatch& e) {
            CHECK(e.row() == 2);
        }
    }
    SUBCASE("bad number") {
        std::istringstream bad("f0,label\nabc,corgi\n");
        CHECK_THROWS_AS(read_dataset(bad, h), ParseError);
    }
    SUBCASE("bad header") {
        std::istringstream bad("x,label\n1,corgi\n");
        CHECK_THROWS_AS(read_dataset(bad, h), ParseError);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "risloc/errors.hpp"
#include "risloc/metrics.hpp"

using namespace risloc;

namespace {

TrialOutcome outcome(std::vector<Vec2> truth, std::vector<Vec2> est) {
    TrialOutcome o;
    o.truth = std::move(truth);
    o.positions = std::move(est);
    o.true_count = static_cast<int>(o.truth.size());
    o.estimated_count = static_cast<int>(o.positions.size());
    return o;
}

// Exhaustive minimum over all injective maps from the smaller set into the larger.
double brute_force(const std::vector<Vec2>& a, const std::vector<Vec2>& e) {
    const bool swap = a.size() > e.size();
    const auto& small = swap ? e : a;
    const auto& large = swap ? a : e;
    std::vector<std::size_t> idx(large.size());
    std::iota(idx.begin(), idx.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < small.size(); ++i)
            pairs.emplace_back(swap ? idx[i] : i, swap ? i : idx[i]);
        std::sort(pairs.begin(), pairs.end());
        best = std::min(best, paired_squared_error(a, e, pairs));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

}  // namespace

TEST_CASE("pair_targets examples") {
    const std::vector<Vec2> same{{1, 2}, {5, 5}, {9, 0}};
    const auto p = pair_targets(same, same);
    REQUIRE(p.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == std::make_pair(i, i));
    CHECK(paired_squared_error(same, same, p) == 0.0);

    const std::vector<Vec2> two{{0, 0}, {10, 0}};
    const std::vector<Vec2> one{{8, 1}};
    const auto q = pair_targets(two, one);
    REQUIRE(q.size() == 1);
    CHECK(q[0] == std::make_pair<std::size_t, std::size_t>(1, 0));

    const std::vector<Vec2> est{{9, 0}, {1, 0}};
    const auto c = pair_targets(two, est);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == std::make_pair<std::size_t, std::size_t>(0, 1));
    CHECK(c[1] == std::make_pair<std::size_t, std::size_t>(1, 0));
    CHECK(paired_squared_error(two, est, c) == 2.0);

    CHECK(pair_targets({}, est).empty());
    CHECK(pair_targets(two, {}).empty());
}

TEST_CASE("pair_targets equals the exhaustive optimum") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> n(0, 6);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int inst = 0; inst < 300; ++inst) {
        std::vector<Vec2> a(static_cast<std::size_t>(n(rng))), e(static_cast<std::size_t>(n(rng)));
        for (auto& p : a) p = {u(rng), u(rng)};
        for (auto& p : e) p = {u(rng), u(rng)};
        const auto pairs = pair_targets(a, e);
        CHECK(pairs.size() == std::min(a.size(), e.size()));
        if (pairs.empty()) continue;
        CHECK(paired_squared_error(a, e, pairs) == brute_force(a, e));
    }
}

TEST_CASE("mse") {
    CHECK(*mse({outcome({{1, 1}}, {{1, 1}})}) == 0.0);
    CHECK(*mse({outcome({{0, 0}}, {{0.3, 0.4}})}) == doctest::Approx(0.25));
    CHECK(*mse({outcome({{0, 0}}, {{1, 0}}), outcome({{0, 0}}, {{std::sqrt(3.0), 0}})}) == doctest::Approx(2.0));
    CHECK_FALSE(mse({outcome({{0, 0}}, {})}).has_value());
    // normalized by the total number of pairs
    CHECK(*mse({outcome({{0, 0}, {10, 0}}, {{1, 0}, {10, 2}}), outcome({{0, 0}}, {{0, 3}})}) ==
          doctest::Approx(14.0 / 3.0));

    // translation invariance
    const Vec2 t{123.4, -56.7};
    const TrialOutcome o = outcome({{1, 2}, {7, 3}}, {{1.5, 2.2}, {6.1, 3.3}, {40, 40}});
    const TrialOutcome moved = outcome({o.truth[0] + t, o.truth[1] + t},
                                       {o.positions[0] + t, o.positions[1] + t, o.positions[2] + t});
    CHECK(*mse({moved}) == doctest::Approx(*mse({o})).epsilon(1e-9));
}

TEST_CASE("detection probability") {
    TrialOutcome hit = outcome({{0, 0}}, {{0, 0}});
    TrialOutcome miss = outcome({{0, 0}}, {});
    CHECK(detection_probability({hit, hit}) == 1.0);
    CHECK(detection_probability({miss, miss}) == 0.0);
    CHECK(detection_probability({hit, hit, miss, hit}) == 0.75);
    CHECK_THROWS_AS(detection_probability({}), InvalidParameterError);
}

TEST_CASE("srp") {
    const TrialOutcome good = outcome({{0, 0}, {5, 5}}, {{0.1, 0}, {5, 5.2}});
    CHECK(srp({good, good}, 1.0) == 1.0);
    const TrialOutcome short_ = outcome({{0, 0}, {5, 5}}, {{0, 0}});
    CHECK(srp({short_}, 1.0) == 0.0);
    CHECK(srp({outcome({{0, 0}}, {{0.5, 0}}), outcome({{0, 0}}, {{2, 0}})}, 1.0) == 0.5);

    // K_hat > K: success unless strict
    const TrialOutcome extra = outcome({{0, 0}}, {{0.2, 0}, {50, 50}});
    CHECK(srp({extra}, 1.0) == 1.0);
    CHECK(srp({extra}, 1.0, true) == 0.0);

    // monotone in epsilon
    std::vector<TrialOutcome> mixed{outcome({{0, 0}}, {{0.3, 0}}), outcome({{0, 0}}, {{1.7, 0}}),
                                    outcome({{0, 0}}, {{4, 0}})};
    double last = 0.0;
    for (double eps = 0.1; eps < 6.0; eps += 0.1) {
        const double v = srp(mixed, eps);
        CHECK(v >= last);
        last = v;
    }
}

TEST_CASE("summarize") {
    TrialOutcome a = outcome({{0, 0}}, {{0.3, 0.4}});
    a.runtime_ms = 10.0;
    TrialOutcome b = outcome({{0, 0}, {9, 9}}, {});
    b.runtime_ms = 30.0;
    b.failures.push_back({{10.0, 1e-6}, "x"});
    const MetricsReport r = summarize({a, b}, 1.0);
    CHECK(r.trials == 2);
    CHECK(*r.mse == doctest::Approx(0.25));
    CHECK(r.p_d == 0.5);
    CHECK(r.srp == 0.5);
    CHECK(r.total_pairs == 1);
    CHECK(r.mapping_failures == 1);
    CHECK(r.mean_runtime_ms == 20.0);
}

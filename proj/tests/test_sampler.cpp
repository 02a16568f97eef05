#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "genuslab/oracle.hpp"
#include "genuslab/rng.hpp"
#include "genuslab/sampler.hpp"

using namespace genuslab;

namespace {

CombinatorialMap torus_quad() {
    return build_and_validate({1, 2, 3, 0, 5, 6, 7, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, 0,
                              {}, Profile::quadrangulation);
}

bool uniform_fit(const std::map<std::vector<std::uint32_t>, std::uint64_t>& counts,
                 std::size_t cells, std::uint64_t draws) {
    REQUIRE(counts.size() <= cells);
    double expected = static_cast<double>(draws) / static_cast<double>(cells);
    double stat = 0;
    for (const auto& [key, seen] : counts) {
        double diff = static_cast<double>(seen) - expected;
        stat += diff * diff / expected;
    }
    stat += expected * static_cast<double>(cells - counts.size());
    boost::math::chi_squared dist(static_cast<double>(cells - 1));
    return stat < boost::math::quantile(dist, 0.99);
}

// Two-sample chi-square with equal totals: are both count vectors draws from
// one distribution?
bool same_distribution(const std::map<std::vector<std::uint32_t>, std::uint64_t>& a,
                       const std::map<std::vector<std::uint32_t>, std::uint64_t>& b,
                       std::size_t cells) {
    std::map<std::vector<std::uint32_t>, std::pair<std::uint64_t, std::uint64_t>> merged;
    for (const auto& [k, v] : a) merged[k].first = v;
    for (const auto& [k, v] : b) merged[k].second = v;
    REQUIRE(merged.size() <= cells);
    double stat = 0;
    for (const auto& [k, v] : merged) {
        double diff = static_cast<double>(v.first) - static_cast<double>(v.second);
        stat += diff * diff / static_cast<double>(v.first + v.second);
    }
    boost::math::chi_squared dist(static_cast<double>(cells - 1));
    return stat < boost::math::quantile(dist, 0.99);
}

void check_emitted(const CombinatorialMap& m, int n, int g) {
    REQUIRE(m.num_faces() == static_cast<std::uint32_t>(n));
    REQUIRE(m.genus() == g);
    REQUIRE(m.dart_count() == static_cast<Dart>(4 * n));
    // round trip through the validator under the strict profile
    build_and_validate(m.sigma_array(), m.alpha_array(), m.root(), m.hole_reps(),
                       Profile::quadrangulation);
}

}  // namespace

TEST_CASE("sampler spec validation") {
    CHECK_THROWS_AS((SamplerSpec{0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SamplerSpec{1, -1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SamplerSpec{1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((SamplerSpec{3, 2}.validate()), std::invalid_argument);
    CHECK_NOTHROW((SamplerSpec{2, 1}.validate()));
    CHECK_NOTHROW((SamplerSpec{4, 2}.validate()));
}

TEST_CASE("exact sampling is deterministic in the seed") {
    SamplerSpec spec{3, 1};
    std::vector<std::vector<std::uint32_t>> first;
    for (int run = 0; run < 2; ++run) {
        auto rng = Rng::stream(91, 0);
        std::vector<std::vector<std::uint32_t>> codes;
        for (int i = 0; i < 20; ++i) codes.push_back(canonical_code(sample_exact(spec, rng)));
        if (run == 0)
            first = std::move(codes);
        else
            CHECK(first == codes);
    }
}

TEST_CASE("exact sampling at (2,1) always lands on the square torus") {
    SamplerSpec spec{2, 1};
    auto rng = Rng::stream(92, 0);
    auto want = canonical_code(torus_quad());
    for (int i = 0; i < 200; ++i) {
        auto m = sample_exact(spec, rng);
        check_emitted(m, 2, 1);
        REQUIRE(canonical_code(m) == want);
    }
}

TEST_CASE("exact sampling at (1,0) splits evenly between the two maps") {
    SamplerSpec spec{1, 0};
    auto rng = Rng::stream(93, 0);
    std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
    const std::uint64_t draws = 100'000;
    for (std::uint64_t i = 0; i < draws; ++i) ++counts[canonical_code(sample_exact(spec, rng))];
    CHECK(counts.size() == 2);
    CHECK(uniform_fit(counts, 2, draws));
}

TEST_CASE("exhaustive backend is uniform on the oracle list") {
    SamplerSpec spec{2, 0, SampleMethod::exhaustive};
    auto rng = Rng::stream(94, 0);
    std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
    const std::uint64_t draws = 27'000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        auto m = sample_exhaustive(spec, rng);
        check_emitted(m, 2, 0);
        ++counts[canonical_code(m)];
    }
    CHECK(uniform_fit(counts, 9, draws));

    SamplerSpec unique{2, 1, SampleMethod::exhaustive};
    for (int i = 0; i < 10; ++i)
        CHECK(canonical_code(sample_exhaustive(unique, rng)) == canonical_code(torus_quad()));

    SamplerSpec too_big{5, 1, SampleMethod::exhaustive};
    CHECK_THROWS_AS(sample_exhaustive(too_big, rng), std::invalid_argument);
}

TEST_CASE("exact and exhaustive backends agree in distribution at (3,1)") {
    const std::uint64_t draws = 100'000;
    SamplerSpec spec{3, 1};
    auto rng = Rng::stream(95, 0);
    std::map<std::vector<std::uint32_t>, std::uint64_t> exact, exhaustive;
    for (std::uint64_t i = 0; i < draws; ++i) ++exact[canonical_code(sample_exact(spec, rng))];
    spec.method = SampleMethod::exhaustive;
    for (std::uint64_t i = 0; i < draws; ++i)
        ++exhaustive[canonical_code(sample_exhaustive(spec, rng))];
    CHECK(exact.size() == 20);
    CHECK(same_distribution(exact, exhaustive, 20));
}

TEST_CASE("a zero attempt budget reports the exhausted rejection loop") {
    SamplerSpec spec{3, 1};
    spec.attempt_budget = 0;
    auto rng = Rng::stream(96, 0);
    CHECK_THROWS_WITH(sample_exact(spec, rng),
                      Catch::Matchers::ContainsSubstring("attempt"));
}

TEST_CASE("mcmc stays inside the census and is seed-deterministic") {
    SamplerSpec spec{3, 1, SampleMethod::mcmc};
    spec.mcmc_steps = 400;
    auto rng = Rng::stream(97, 0);
    McmcChain chain(spec, rng);
    auto idx = code_index(enumerate_quadrangulations(3, 1));
    for (int i = 0; i < 400; ++i) {
        chain.step(rng);
        check_emitted(chain.state(), 3, 1);
        REQUIRE(idx.count(canonical_code(chain.state())) == 1);
    }
    CHECK(chain.stats().steps == 400);
    CHECK(chain.stats().accepted + chain.stats().rejected + chain.stats().holds == 400);

    McmcStats s1, s2;
    auto r1 = Rng::stream(98, 0);
    auto m1 = sample_mcmc(spec, r1, &s1);
    auto r2 = Rng::stream(98, 0);
    auto m2 = sample_mcmc(spec, r2, &s2);
    CHECK(canonical_code(m1) == canonical_code(m2));
    CHECK(s1.accepted == s2.accepted);
    CHECK(s1.holds == s2.holds);
}

TEST_CASE("uniformity is stationary under the mcmc kernel at (3,1)") {
    // The move graph on the 20-state census is disconnected (two components
    // of 10), so one trajectory cannot equidistribute. Chains begin at an
    // exact uniform sample, and detailed balance keeps that distribution
    // invariant: after any number of steps the terminal state is still
    // uniform, which is what this measures across 4000 independent chains.
    SamplerSpec spec{3, 1, SampleMethod::mcmc};
    spec.mcmc_steps = 250;
    auto idx = code_index(enumerate_quadrangulations(3, 1));
    REQUIRE(idx.size() == 20);
    std::vector<std::uint64_t> finals(20, 0);
    const std::uint64_t chains = 4000;
    for (std::uint64_t c = 0; c < chains; ++c) {
        auto rng = Rng::stream(99, c);
        ++finals[idx.at(canonical_code(sample_mcmc(spec, rng)))];
    }
    double tv = 0;
    for (std::uint64_t v : finals)
        tv += std::abs(static_cast<double>(v) / static_cast<double>(chains) - 1.0 / 20.0);
    tv /= 2;
    INFO("total variation " << tv);
    CHECK(tv <= 0.05);
}

TEST_CASE("a single mcmc run reaches exactly its component of the census") {
    // Reachability is measured, not assumed: from any (3,1) start the
    // trajectory visits the 10 states of its component and mixes well there.
    SamplerSpec spec{3, 1, SampleMethod::mcmc};
    auto rng = Rng::stream(100, 0);
    McmcChain chain(spec, rng);
    auto idx = code_index(enumerate_quadrangulations(3, 1));
    std::map<std::size_t, std::uint64_t> visits;
    const std::uint64_t steps = 40'000;
    for (std::uint64_t i = 0; i < steps; ++i) {
        chain.step(rng);
        ++visits[idx.at(canonical_code(chain.state()))];
    }
    CHECK(visits.size() == 10);
    double tv = 0;
    for (const auto& [state, v] : visits)
        tv += std::abs(static_cast<double>(v) / static_cast<double>(steps) - 1.0 / 10.0);
    tv /= 2;
    INFO("within-component total variation " << tv);
    CHECK(tv <= 0.05);
}

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <set>

#include "genuslab/geometry.hpp"
#include "genuslab/oracle.hpp"

using namespace genuslab;

namespace {

CombinatorialMap path_map() {
    return build_and_validate({0, 2, 1, 3}, {1, 0, 3, 2}, 0, {}, Profile::quadrangulation);
}

CombinatorialMap torus_quad() {
    return build_and_validate({1, 2, 3, 0, 5, 6, 7, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, 0, {},
                              Profile::quadrangulation);
}

// Minimum length of a noncontractible simple cycle, by enumerating every
// simple closed walk. Exponential; fine for the oracle-sized maps here.
std::optional<std::uint32_t> brute_systole(const CombinatorialMap& m) {
    std::vector<std::vector<Dart>> by_vertex(m.num_vertices());
    for (Dart d = 0; d < m.dart_count(); ++d) by_vertex[m.vertex_of(d)].push_back(d);
    std::optional<std::uint32_t> best;
    std::vector<Dart> cyc;
    std::vector<char> seen(m.num_vertices(), 0);
    std::function<void(std::uint32_t)> grow = [&](std::uint32_t v0) {
        std::uint32_t at = m.vertex_of(m.alpha(cyc.back()));
        if (best && cyc.size() >= *best) return;
        if (at == v0) {
            if (is_simple_cycle(m, cyc) &&
                cut_simple_cycle(m, cyc).cls != CycleClass::contractible)
                best = static_cast<std::uint32_t>(cyc.size());
            return;
        }
        if (seen[at]) return;
        seen[at] = 1;
        for (Dart d : by_vertex[at]) {
            if (d == m.alpha(cyc.back())) continue;
            cyc.push_back(d);
            grow(v0);
            cyc.pop_back();
        }
        seen[at] = 0;
    };
    for (Dart s = 0; s < m.dart_count(); ++s) {
        cyc.assign(1, s);
        std::fill(seen.begin(), seen.end(), 0);
        grow(m.vertex_of(s));
    }
    return best;
}

// All simple noncontractible cycles, as dart sequences (every rotation and
// orientation; duplicates are harmless for minima).
std::vector<std::vector<Dart>> brute_essential_cycles(const CombinatorialMap& m) {
    std::vector<std::vector<Dart>> by_vertex(m.num_vertices());
    for (Dart d = 0; d < m.dart_count(); ++d) by_vertex[m.vertex_of(d)].push_back(d);
    std::vector<std::vector<Dart>> out;
    std::vector<Dart> cyc;
    std::vector<char> seen(m.num_vertices(), 0);
    std::function<void(std::uint32_t)> grow = [&](std::uint32_t v0) {
        std::uint32_t at = m.vertex_of(m.alpha(cyc.back()));
        if (at == v0) {
            if (is_simple_cycle(m, cyc) &&
                cut_simple_cycle(m, cyc).cls != CycleClass::contractible)
                out.push_back(cyc);
            return;
        }
        if (seen[at]) return;
        seen[at] = 1;
        for (Dart d : by_vertex[at]) {
            if (d == m.alpha(cyc.back())) continue;
            cyc.push_back(d);
            grow(v0);
            cyc.pop_back();
        }
        seen[at] = 0;
    };
    for (Dart s = 0; s < m.dart_count(); ++s) {
        cyc.assign(1, s);
        std::fill(seen.begin(), seen.end(), 0);
        grow(m.vertex_of(s));
    }
    return out;
}

// Exact minimum size of a cycle-with-tail: every essential simple cycle,
// paired with every simple tail from the root edge that meets it exactly at
// the tail's far endpoint.
std::optional<std::uint32_t> brute_cycle_tail_min(const CombinatorialMap& m) {
    std::vector<std::vector<Dart>> by_vertex(m.num_vertices());
    for (Dart d = 0; d < m.dart_count(); ++d) by_vertex[m.vertex_of(d)].push_back(d);
    std::optional<std::uint32_t> best;
    auto offer = [&](std::uint32_t s) {
        if (!best || s < *best) best = s;
    };
    for (const auto& cyc : brute_essential_cycles(m)) {
        std::vector<char> on_cycle(m.num_vertices(), 0);
        bool root_edge = false, root_vertex = false;
        for (Dart d : cyc) {
            on_cycle[m.vertex_of(d)] = 1;
            if (d == m.root() || d == m.alpha(m.root())) root_edge = true;
            if (m.vertex_of(d) == m.vertex_of(m.root())) root_vertex = true;
        }
        if (root_edge) offer(static_cast<std::uint32_t>(cyc.size()));
        if (root_vertex) continue;  // any tail would meet the cycle twice
        std::vector<char> on_path(m.num_vertices(), 0);
        on_path[m.vertex_of(m.root())] = 1;
        std::function<void(Dart, std::uint32_t)> walk = [&](Dart last, std::uint32_t len) {
            std::uint32_t at = m.vertex_of(m.alpha(last));
            if (on_cycle[at]) {
                offer(len + static_cast<std::uint32_t>(cyc.size()));
                return;
            }
            if (on_path[at]) return;
            on_path[at] = 1;
            for (Dart d : by_vertex[at]) {
                if (d == m.alpha(last)) continue;
                walk(d, len + 1);
            }
            on_path[at] = 0;
        };
        walk(m.root(), 1);
    }
    return best;
}

std::uint32_t brute_parallel_pairs(const CombinatorialMap& m) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (Dart d = 0; d < m.dart_count(); ++d) {
        if (d > m.alpha(d)) continue;
        auto u = m.vertex_of(d), w = m.vertex_of(m.alpha(d));
        edges.push_back({std::min(u, w), std::max(u, w)});
    }
    std::uint32_t pairs = 0;
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j)
            if (edges[i] == edges[j]) ++pairs;
    return pairs;
}

}  // namespace

TEST_CASE("vertex distances and balls on the path") {
    auto m = path_map();
    CHECK(vertex_distances(m, 0) == std::vector<std::uint32_t>{0, 1, 2});

    auto b0 = ball(m, 0);
    CHECK(b0.map.dart_count() == 0);
    CHECK(b0.map.num_vertices() == 1);
    CHECK(b0.vertex_depth == std::vector<std::uint32_t>{0, 1, 2});

    auto b1 = ball(m, 1);
    CHECK(b1.map.dart_count() == 2);
    CHECK(b1.map.num_vertices() == 2);
    CHECK(b1.map.genus() == 0);
    CHECK(b1.dart_map == std::vector<Dart>{0, 1, kNoDart, kNoDart});
    CHECK(b1.full_faces.empty());  // the quadrangle loses two of its edges

    auto b2 = ball(m, 2);
    CHECK(b2.map.dart_count() == 4);
    CHECK(b2.map.num_vertices() == 3);
    CHECK(b2.full_faces.size() == 1);

    auto d = diameter(m);
    CHECK(d.value == 2);
    CHECK(d.exact);
}

TEST_CASE("torus geometry") {
    auto m = torus_quad();
    auto b = ball(m, 1);
    CHECK(b.map.dart_count() == 8);
    CHECK(b.map.genus() == 1);
    CHECK(b.full_faces.size() == 2);
    CHECK(ball_planar_radius(m) == std::optional<std::uint32_t>{0});
    CHECK(planarity_radius(m) == std::optional<std::uint32_t>{0});
    CHECK(systole(m) == std::optional<std::uint32_t>{2});
    auto cert = shortest_non_contractible(m);
    REQUIRE(cert.has_value());
    CHECK(cert->cycle.size() == 2);
    CHECK(is_simple_cycle(m, cert->cycle));

    auto census = two_cycle_census(m);
    CHECK(census.nonseparating == 6);
    CHECK(census.contractible == 0);
    CHECK(census.separating == 0);
    CHECK(census.total() == brute_parallel_pairs(m));

    auto ct = cycle_with_tail_min(m);
    CHECK(ct.lower == std::optional<std::uint32_t>{1});
    CHECK(ct.upper == std::optional<std::uint32_t>{2});
    REQUIRE(ct.certificate.has_value());
    CHECK(ct.certificate->path.empty());
    CHECK(ct.certificate->cycle.size() == 2);
    CHECK(diameter(m).value == 1);

    auto report = geometry_report(m);
    CHECK(report.planarity_radius == std::optional<std::uint32_t>{0});
    CHECK(report.x_nonseparating == 6);
    CHECK(report.diam.value == 1);
}

TEST_CASE("planar maps have no essential cycles") {
    for (const auto& m : enumerate_quadrangulations(3, 0)) {
        CHECK_FALSE(ball_planar_radius(m).has_value());
        CHECK_FALSE(planarity_radius(m).has_value());
        CHECK_FALSE(systole(m).has_value());
        auto census = two_cycle_census(m);
        CHECK(census.nonseparating == 0);
        CHECK(census.separating == 0);
        CHECK(census.total() == brute_parallel_pairs(m));
        auto ct = cycle_with_tail_min(m);
        CHECK_FALSE(ct.lower.has_value());
        CHECK_FALSE(ct.upper.has_value());
        CHECK_FALSE(ct.certificate.has_value());
        CHECK(diameter(m).exact);
    }
}

TEST_CASE("systole matches exhaustive search") {
    auto maps = enumerate_quadrangulations(2, 1);
    auto more = enumerate_quadrangulations(3, 1);
    maps.insert(maps.end(), more.begin(), more.end());
    REQUIRE(maps.size() == 21);
    for (const auto& m : maps) {
        auto fast = systole(m), brute = brute_systole(m);
        REQUIRE(brute.has_value());
        CHECK(fast == brute);
    }
}

TEST_CASE("radius and cycle-size relations on genus-one maps") {
    auto maps = enumerate_quadrangulations(3, 1);
    int with_tail_value = 0;
    for (const auto& m : maps) {
        auto pr = planarity_radius(m);
        auto bpr = ball_planar_radius(m);
        auto sys = systole(m);
        auto ct = cycle_with_tail_min(m);
        REQUIRE(pr.has_value());
        REQUIRE(bpr.has_value());
        REQUIRE(sys.has_value());

        CHECK(*bpr >= *pr);
        CHECK(*sys % 2 == 0);

        REQUIRE(ct.lower.has_value());
        CHECK(*ct.lower == *pr + 1);

        auto brute = brute_cycle_tail_min(m);
        if (brute && *brute <= ct.cap) {
            REQUIRE(ct.upper.has_value());
            CHECK(*ct.upper == *brute);
            ++with_tail_value;
            CHECK(*ct.upper >= *sys);
            // A cycle-with-tail of size s puts an essential cycle in the
            // s-ball, so the planarity radius sits strictly below it.
            CHECK(*ct.upper >= *ct.lower);

            REQUIRE(ct.certificate.has_value());
            const auto& cert = *ct.certificate;
            CHECK(cert.size() == *ct.upper);
            CHECK(is_simple_cycle(m, cert.cycle));
            CHECK(cut_simple_cycle(m, cert.cycle).cls != CycleClass::contractible);
            if (cert.path.empty()) {
                // an empty tail means the cycle itself uses the root edge
                bool has_root_edge = false;
                for (Dart d : cert.cycle)
                    if (d == m.root() || d == m.alpha(m.root())) has_root_edge = true;
                CHECK(has_root_edge);
            } else {
                CHECK(cert.path.front() == m.root());
            }
        } else {
            CHECK_FALSE(ct.upper.has_value());
            CHECK_FALSE(ct.certificate.has_value());
        }
        CHECK(two_cycle_census(m).total() == brute_parallel_pairs(m));
    }
    CHECK(with_tail_value > 0);
}

TEST_CASE("nonseparating count balances against disjoint edge pairs") {
    // Collapsing a nonseparating 2-cycle and gluing a disjoint edge pair are
    // inverse moves, so the totals across one genus step agree.
    std::uint64_t x_total = 0;
    for (const auto& m : enumerate_quadrangulations(2, 1))
        x_total += two_cycle_census(m).nonseparating;
    std::uint64_t pair_total = 0;
    for (const auto& m : enumerate_quadrangulations(2, 0))
        pair_total += disjoint_edge_pairs(m);
    CHECK(x_total == 6);
    CHECK(pair_total == 6);
}

TEST_CASE("census classes move under the collapse cut") {
    // Collapsing a nonseparating 2-cycle drops the genus by one and the
    // nonseparating count never reaches zero while genus remains positive.
    auto maps = enumerate_quadrangulations(3, 1);
    for (const auto& m : maps) {
        auto census = two_cycle_census(m);
        CHECK(census.nonseparating > 0);  // genus 1 came from somewhere
        bool collapsed = false;
        for (Dart a = 0; a < m.dart_count() && !collapsed; ++a) {
            for (Dart b = 0; b < m.dart_count() && !collapsed; ++b) {
                if (a == b || m.alpha(a) == b) continue;
                if (m.vertex_of(a) != m.vertex_of(b) ||
                    m.vertex_of(m.alpha(a)) != m.vertex_of(m.alpha(b)))
                    continue;
                auto cut = cut_two_cycle(m, a, b);
                if (!cut.nonseparating) continue;
                collapsed = true;
                CHECK(cut.map->genus() == 0);
                CHECK(two_cycle_census(*cut.map).nonseparating == 0);
            }
        }
        CHECK(collapsed);
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "genuslab/cms.hpp"
#include "genuslab/oracle.hpp"

using namespace genuslab;

namespace {

CombinatorialMap one_edge_tree() {
    return build_and_validate({0, 1}, {1, 0}, 0, {}, Profile::unicellular);
}

CombinatorialMap torus_unicellular() {
    return build_and_validate({1, 2, 3, 0}, {2, 3, 0, 1}, 0, {}, Profile::unicellular);
}

CombinatorialMap path_quad() {
    return build_and_validate({0, 2, 1, 3}, {1, 0, 3, 2}, 0, {}, Profile::quadrangulation);
}

CombinatorialMap torus_quad() {
    return build_and_validate({1, 2, 3, 0, 5, 6, 7, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, 0,
                              {}, Profile::quadrangulation);
}

// Canonical code extended with per-vertex labels, read off in canonical dart
// order so two labeled maps compare equal iff some root-preserving
// isomorphism matches the labels too.
std::vector<std::uint32_t> labeled_code(const LabeledUnicellular& lu) {
    auto code = canonical_code(lu.map);
    for (Dart d : canonical_dart_order(lu.map))
        code.push_back(static_cast<std::uint32_t>(lu.labels[lu.map.vertex_of(d)]));
    return code;
}

// Mark a vertex by its first dart in canonical order; the mark survives any
// root-preserving isomorphism.
std::vector<std::uint32_t> pointed_code(const PointedQuadrangulation& pq) {
    for (Dart d : canonical_dart_order(pq.map))
        if (pq.map.vertex_of(d) == pq.pointed_vertex)
            return canonical_code_with_marks(pq.map, {{d}});
    FAIL("pointed vertex has no dart");
    return {};
}

std::vector<std::uint32_t> distances_from(const CombinatorialMap& m, std::uint32_t src) {
    std::vector<std::vector<Dart>> at(m.num_vertices());
    for (Dart d = 0; d < m.dart_count(); ++d) at[m.vertex_of(d)].push_back(d);
    std::vector<std::uint32_t> dist(m.num_vertices(), ~0u);
    dist[src] = 0;
    std::vector<std::uint32_t> queue{src};
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (Dart d : at[queue[head]]) {
            std::uint32_t u = m.vertex_of(m.alpha(d));
            if (dist[u] == ~0u) {
                dist[u] = dist[queue[head]] + 1;
                queue.push_back(u);
            }
        }
    return dist;
}

}  // namespace

TEST_CASE("forward sends the one-edge tree to the pointed path") {
    LabeledUnicellular lu{one_edge_tree(), {1, 1}};
    auto pq = cms_forward(lu, RootSign::plus);
    CHECK(pq.map.dart_count() == 4);
    CHECK(pq.map.genus() == 0);

    PointedQuadrangulation want{path_quad(), 0};
    want.pointed_vertex = want.map.vertex_of(1);  // middle of the path
    CHECK(pointed_code(pq) == pointed_code(want));

    // flipping the sign reroots onto the other side of the same edge
    auto pm = cms_forward(lu, RootSign::minus);
    CHECK(canonical_code(pq.map) != canonical_code(pm.map));
    CHECK(pm.map.vertex_of(pm.map.root()) == pm.pointed_vertex);
}

TEST_CASE("forward sends the doubled loop to the torus quadrangulation") {
    LabeledUnicellular lu{torus_unicellular(), {1}};
    for (RootSign eps : {RootSign::plus, RootSign::minus}) {
        auto pq = cms_forward(lu, eps);
        CHECK(pq.map.dart_count() == 8);
        CHECK(pq.map.genus() == 1);
        CHECK(canonical_code(pq.map) == canonical_code(torus_quad()));
        // the point lands on the added vertex, across the root edge from the
        // high side exactly when the sign is positive
        std::uint32_t root_side = pq.map.vertex_of(pq.map.root());
        if (eps == RootSign::plus)
            CHECK(root_side != pq.pointed_vertex);
        else
            CHECK(root_side == pq.pointed_vertex);
    }
}

TEST_CASE("vertex labels become graph distances to the point") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& u : enumerate_unicellular(n))
            for (const auto& lab : enumerate_well_labelings(u)) {
                LabeledUnicellular lu{u, lab};
                auto pq = cms_forward(lu, RootSign::plus);
                auto dist = distances_from(pq.map, pq.pointed_vertex);
                std::vector<std::uint32_t> want(lab.begin(), lab.end());
                want.push_back(0);
                std::sort(want.begin(), want.end());
                std::sort(dist.begin(), dist.end());
                REQUIRE(dist == want);
            }
}

TEST_CASE("backward inverts forward on every small labeled map") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& u : enumerate_unicellular(n))
            for (const auto& lab : enumerate_well_labelings(u)) {
                LabeledUnicellular lu{u, lab};
                auto ref = labeled_code(lu);
                for (RootSign eps : {RootSign::plus, RootSign::minus}) {
                    auto pq = cms_forward(lu, eps);
                    auto back = cms_backward(pq.map, pq.pointed_vertex);
                    REQUIRE(back.eps == eps);
                    REQUIRE(labeled_code(back.labeled) == ref);
                }
            }
}

TEST_CASE("forward inverts backward on every small pointed quadrangulation") {
    for (int n = 1; n <= 3; ++n)
        for (const auto& q : enumerate_quadrangulations(n))
            for (std::uint32_t v0 = 0; v0 < q.num_vertices(); ++v0) {
                PointedQuadrangulation given{q, v0};
                auto ref = pointed_code(given);
                auto back = cms_backward(q, v0);
                CHECK(back.labeled.map.num_faces() == 1);
                CHECK(back.labeled.map.genus() == q.genus());
                auto pq = cms_forward(back.labeled, back.eps);
                REQUIRE(pointed_code(pq) == ref);
            }
}

TEST_CASE("the correspondence is a bijection onto pointed quadrangulations") {
    for (int n = 1; n <= 4; ++n) {
        std::map<int, std::set<std::vector<std::uint32_t>>> images;
        std::map<int, long> sources;
        for (const auto& u : enumerate_unicellular(n)) {
            int g = u.genus();
            for (const auto& lab : enumerate_well_labelings(u)) {
                LabeledUnicellular lu{u, lab};
                for (RootSign eps : {RootSign::plus, RootSign::minus}) {
                    images[g].insert(pointed_code(cms_forward(lu, eps)));
                    ++sources[g];
                }
            }
        }
        std::map<int, long> pointed_count;
        for (const auto& q : enumerate_quadrangulations(n))
            pointed_count[q.genus()] += q.num_vertices();
        REQUIRE(images.size() == pointed_count.size());
        for (const auto& [g, codes] : images) {
            INFO("n=" << n << " g=" << g);
            // distinct images: the pair (labeling, sign) is recoverable
            CHECK(static_cast<long>(codes.size()) == sources[g]);
            // and together they exhaust every pointed quadrangulation
            CHECK(static_cast<long>(codes.size()) == pointed_count[g]);
        }
    }
}

TEST_CASE("degenerate inputs are rejected") {
    auto q = torus_quad();
    CHECK_THROWS_AS(cms_backward(q, q.num_vertices()), std::invalid_argument);
    auto empty = build_and_validate({}, {}, 0, {}, Profile::quadrangulation);
    CHECK_THROWS_AS(cms_backward(empty, 0), std::invalid_argument);
}

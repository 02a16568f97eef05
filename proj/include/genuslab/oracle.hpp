#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "genuslab/codec.hpp"
#include "genuslab/map.hpp"

namespace genuslab {

namespace detail {

// Union-find with a parity bit per element and an undo trail, for the
// backtracking enumerator. No path compression so rollback is trivial.
class ParityDsu {
public:
    explicit ParityDsu(std::size_t n) : parent_(n), rank_(n, 0), parity_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
    }

    std::pair<int, std::uint8_t> find(int x) const {
        std::uint8_t p = 0;
        while (parent_[x] != x) { p ^= parity_[x]; x = parent_[x]; }
        return {x, p};
    }

    // Enforce parity(a) xor parity(b) == rel. False on conflict.
    bool unite(int a, int b, std::uint8_t rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        if (rank_[ra] < rank_[rb]) { std::swap(ra, rb); std::swap(pa, pb); }
        parent_[rb] = ra;
        parity_[rb] = pa ^ pb ^ rel;
        bool bumped = rank_[ra] == rank_[rb];
        if (bumped) ++rank_[ra];
        trail_.push_back({rb, ra, bumped});
        return true;
    }

    std::size_t mark() const { return trail_.size(); }

    void rollback(std::size_t m) {
        while (trail_.size() > m) {
            auto [child, root, bumped] = trail_.back();
            trail_.pop_back();
            parent_[child] = child;
            parity_[child] = 0;
            if (bumped) --rank_[root];
        }
    }

private:
    struct Step { int child; int root; bool bumped; };
    std::vector<int> parent_;
    std::vector<int> rank_;
    std::vector<std::uint8_t> parity_;
    std::vector<Step> trail_;
};

}  // namespace detail

// Every rooted bipartite quadrangulation with n faces, one representative per
// root-preserving isomorphism class, restricted to genus g when g >= 0.
//
// The face permutation is pinned to n consecutive 4-cycles with the root at
// dart 0; the search assigns the edge involution pair by pair. Two prunes:
// a dart 2-coloring kept consistent with "opposite ends differ, face
// neighbors differ" (kills non-bipartite branches early), and a face
// component whose darts are all matched while others remain (kills
// disconnected branches). Distinct assignments can still give the same
// rooted map, so results are deduplicated by canonical code.
//
// Practical up to n = 4 (the n = 5 search space is three orders larger).
inline std::vector<CombinatorialMap> enumerate_quadrangulations(int n, int genus = -1) {
    if (n == 0) {
        if (genus > 0) return {};
        return {build_and_validate({}, {}, 0, {}, Profile::quadrangulation)};
    }
    const int D = 4 * n;
    std::vector<Dart> phi(D);
    for (int d = 0; d < D; ++d) phi[d] = static_cast<Dart>((d & ~3) | ((d + 1) & 3));

    detail::ParityDsu colors(D);
    for (int d = 0; d < D; ++d) colors.unite(d, phi[d], 1);

    // Face components: root id -> number of unmatched darts in the component.
    detail::ParityDsu faces(n);
    std::vector<int> unmatched_in(n, 4);

    std::vector<int> match(D, -1);
    int unmatched_total = D;
    std::map<std::vector<std::uint32_t>, bool> seen;
    std::vector<CombinatorialMap> out;

    auto emit = [&]() {
        std::vector<Dart> alpha(D), sigma(D);
        for (int d = 0; d < D; ++d) alpha[d] = static_cast<Dart>(match[d]);
        for (int d = 0; d < D; ++d) sigma[d] = phi[alpha[d]];
        auto m = build_and_validate(std::move(sigma), std::move(alpha), 0, {},
                                    Profile::quadrangulation);
        if (genus >= 0 && m.genus() != genus) return;
        auto code = canonical_code(m);
        if (seen.emplace(std::move(code), true).second) out.push_back(std::move(m));
    };

    auto search = [&](auto&& self, int from) -> void {
        int a = from;
        while (a < D && match[a] != -1) ++a;
        if (a == D) { emit(); return; }
        for (int b = a + 1; b < D; ++b) {
            if (match[b] != -1) continue;
            std::size_t cm = colors.mark();
            if (!colors.unite(a, b, 1)) { colors.rollback(cm); continue; }
            std::size_t fm = faces.mark();
            int fa = faces.find(a / 4).first, fb = faces.find(b / 4).first;
            int saved_fa = unmatched_in[fa], saved_fb = unmatched_in[fb];
            int merged;
            if (fa == fb) {
                unmatched_in[fa] -= 2;
                merged = fa;
            } else {
                faces.unite(fa, fb, 0);
                merged = faces.find(fa).first;
                unmatched_in[merged] = saved_fa + saved_fb - 2;
            }
            match[a] = b;
            match[b] = a;
            unmatched_total -= 2;
            if (unmatched_in[merged] > 0 || unmatched_total == 0) self(self, a + 1);
            unmatched_total += 2;
            match[a] = -1;
            match[b] = -1;
            unmatched_in[fa] = saved_fa;
            unmatched_in[fb] = saved_fb;
            faces.rollback(fm);
            colors.rollback(cm);
        }
    };
    search(search, 0);
    return out;
}

// Every rooted unicellular map with n edges (genus filter as above). Here the
// face tour from the root is pinned to 0,1,...,2n-1, which makes the dart
// labeling canonical: each fixed-point-free involution is a distinct rooted
// map and every rooted unicellular map occurs exactly once. No dedup.
inline std::vector<CombinatorialMap> enumerate_unicellular(int n, int genus = -1) {
    if (n == 0) return {};
    const int D = 2 * n;
    std::vector<Dart> phi(D);
    for (int d = 0; d < D; ++d) phi[d] = static_cast<Dart>((d + 1) % D);
    std::vector<int> match(D, -1);
    std::vector<CombinatorialMap> out;
    auto emit = [&]() {
        std::vector<Dart> alpha(D), sigma(D);
        for (int d = 0; d < D; ++d) alpha[d] = static_cast<Dart>(match[d]);
        for (int d = 0; d < D; ++d) sigma[d] = phi[alpha[d]];
        auto m = build_and_validate(std::move(sigma), std::move(alpha), 0, {},
                                    Profile::unicellular);
        if (genus >= 0 && m.genus() != genus) return;
        out.push_back(std::move(m));
    };
    auto search = [&](auto&& self, int from) -> void {
        int a = from;
        while (a < D && match[a] != -1) ++a;
        if (a == D) { emit(); return; }
        for (int b = a + 1; b < D; ++b) {
            if (match[b] != -1) continue;
            match[a] = b;
            match[b] = a;
            self(self, a + 1);
            match[a] = -1;
            match[b] = -1;
        }
    };
    search(search, 0);
    return out;
}

// All well-labelings of a map: integer vertex labels with minimum exactly 1
// that change by at most 1 along every edge.
inline std::vector<std::vector<int>> enumerate_well_labelings(const CombinatorialMap& m) {
    const int V = static_cast<int>(m.num_vertices());
    std::vector<std::vector<int>> adj(V);
    for (Dart d = 0; d < m.dart_count(); ++d)
        adj[m.vertex_of(d)].push_back(static_cast<int>(m.vertex_of(m.alpha(d))));
    std::vector<int> label(V, 0);
    std::vector<std::vector<int>> out;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == V) {
            if (*std::min_element(label.begin(), label.end()) == 1) out.push_back(label);
            return;
        }
        for (int l = 1; l <= V; ++l) {
            bool ok = true;
            for (int u : adj[v])
                if (u < v && std::abs(label[u] - l) > 1) { ok = false; break; }
            if (!ok) continue;
            label[v] = l;
            self(self, v + 1);
        }
    };
    rec(rec, 0);
    return out;
}

// Lookup table from canonical code to position, for frequency tests against
// an enumerated list.
inline std::map<std::vector<std::uint32_t>, std::size_t> code_index(
    const std::vector<CombinatorialMap>& maps) {
    std::map<std::vector<std::uint32_t>, std::size_t> idx;
    for (std::size_t i = 0; i < maps.size(); ++i) idx.emplace(canonical_code(maps[i]), i);
    return idx;
}

}  // namespace genuslab

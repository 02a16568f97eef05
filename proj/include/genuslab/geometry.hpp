#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "genuslab/map.hpp"
#include "genuslab/surgery.hpp"

namespace genuslab {

inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

namespace detail {

// Darts grouped by vertex id (vertex_of is dart-keyed; BFS wants the reverse).
struct VertexIndex {
    std::vector<std::vector<Dart>> at;

    explicit VertexIndex(const CombinatorialMap& m) : at(m.num_vertices()) {
        for (Dart d = 0; d < m.dart_count(); ++d) at[m.vertex_of(d)].push_back(d);
    }
};

inline std::vector<std::uint32_t> distances_impl(const CombinatorialMap& m,
                                                 const VertexIndex& vx, std::uint32_t src) {
    std::vector<std::uint32_t> dist(m.num_vertices(), kUnreached);
    dist[src] = 0;
    std::vector<std::uint32_t> queue{src};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        for (Dart d : vx.at[v]) {
            std::uint32_t u = m.vertex_of(m.alpha(d));
            if (dist[u] == kUnreached) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

struct BfsTree {
    std::vector<std::uint32_t> depth;
    // Dart at the parent pointing toward the child; kNoDart at the source.
    std::vector<Dart> parent_dart;
};

inline BfsTree bfs_tree(const CombinatorialMap& m, const VertexIndex& vx,
                        std::uint32_t src) {
    BfsTree t;
    t.depth.assign(m.num_vertices(), kUnreached);
    t.parent_dart.assign(m.num_vertices(), kNoDart);
    t.depth[src] = 0;
    std::vector<std::uint32_t> queue{src};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        for (Dart d : vx.at[v]) {
            std::uint32_t u = m.vertex_of(m.alpha(d));
            if (t.depth[u] == kUnreached) {
                t.depth[u] = t.depth[v] + 1;
                t.parent_dart[u] = d;
                queue.push_back(u);
            }
        }
    }
    return t;
}

inline bool is_tree_dart(const CombinatorialMap& m, const BfsTree& t, Dart d) {
    return t.parent_dart[m.vertex_of(m.alpha(d))] == d ||
           t.parent_dart[m.vertex_of(d)] == m.alpha(d);
}

// Simple cycle formed by a non-tree edge and the two tree paths trimmed at
// their deepest common vertex.
inline std::vector<Dart> fundamental_cycle(const CombinatorialMap& m, const BfsTree& t,
                                           Dart d) {
    std::uint32_t u = m.vertex_of(d), w = m.vertex_of(m.alpha(d));
    std::vector<Dart> up, down;
    std::uint32_t uu = u, ww = w;
    while (t.depth[uu] > t.depth[ww]) {
        up.push_back(m.alpha(t.parent_dart[uu]));
        uu = m.vertex_of(t.parent_dart[uu]);
    }
    while (t.depth[ww] > t.depth[uu]) {
        down.push_back(t.parent_dart[ww]);
        ww = m.vertex_of(t.parent_dart[ww]);
    }
    while (uu != ww) {
        up.push_back(m.alpha(t.parent_dart[uu]));
        uu = m.vertex_of(t.parent_dart[uu]);
        down.push_back(t.parent_dart[ww]);
        ww = m.vertex_of(t.parent_dart[ww]);
    }
    std::vector<Dart> cycle = std::move(up);
    cycle.insert(cycle.end(), down.rbegin(), down.rend());
    cycle.push_back(m.alpha(d));
    return cycle;
}

}  // namespace detail

// Edge-distance BFS over vertices.
inline std::vector<std::uint32_t> vertex_distances(const CombinatorialMap& m,
                                                   std::uint32_t src) {
    return detail::distances_impl(m, detail::VertexIndex(m), src);
}

struct BallResult {
    CombinatorialMap map;
    std::vector<Dart> dart_map;  // ambient dart -> ball dart, kNoDart outside
    std::vector<std::uint32_t> vertex_depth;  // ambient vertex -> distance from root
    std::vector<std::uint32_t> full_faces;    // ambient faces with every edge inside
};

// Induced sub-map on the vertices within edge-distance r of the root vertex:
// a dart survives when both of its endpoints do. The ball's genus counts
// every rotation-system face, boundary regions included. Radius zero gives
// the empty map (bipartite maps have no loops).
inline BallResult ball(const CombinatorialMap& m, std::uint32_t r) {
    BallResult out;
    out.vertex_depth = vertex_distances(m, m.vertex_of(m.root()));
    const Dart D = m.dart_count();
    out.dart_map.assign(D, kNoDart);
    Dart n = 0;
    for (Dart d = 0; d < D; ++d)
        if (out.vertex_depth[m.vertex_of(d)] <= r &&
            out.vertex_depth[m.vertex_of(m.alpha(d))] <= r)
            out.dart_map[d] = n++;
    std::vector<char> face_out(m.num_faces(), 0);
    for (Dart d = 0; d < D; ++d)
        if (out.dart_map[d] == kNoDart) face_out[m.face_of(d)] = 1;
    for (std::uint32_t f = 0; f < m.num_faces(); ++f)
        if (!face_out[f] && D > 0) out.full_faces.push_back(f);
    if (n == 0) {
        out.map = build_and_validate({}, {}, 0, {}, Profile::general);
        out.full_faces.clear();
        return out;
    }
    std::vector<Dart> sigma(n), alpha(n);
    for (Dart d = 0; d < D; ++d) {
        if (out.dart_map[d] == kNoDart) continue;
        Dart s = m.sigma(d);
        while (out.dart_map[s] == kNoDart) s = m.sigma(s);
        sigma[out.dart_map[d]] = out.dart_map[s];
        alpha[out.dart_map[d]] = out.dart_map[m.alpha(d)];
    }
    out.map = build_and_validate(std::move(sigma), std::move(alpha), out.dart_map[m.root()],
                                 {}, Profile::general);
    return out;
}

// Largest radius whose ball is still planar; nullopt on a planar map. Genus
// is monotone in the radius (growing the ball only adds edges to a fixed
// rotation system), so the first nonplanar radius decides.
inline std::optional<std::uint32_t> ball_planar_radius(const CombinatorialMap& m) {
    if (m.genus() == 0) return std::nullopt;
    auto dist = vertex_distances(m, m.vertex_of(m.root()));
    std::uint32_t ecc = *std::max_element(dist.begin(), dist.end());
    for (std::uint32_t r = 1; r <= ecc; ++r)
        if (ball(m, r).map.genus() > 0) return r - 1;
    throw MapError("positive-genus map with all balls planar");
}

// Largest radius r such that every cycle inside the ball of radius r is
// contractible. Ball cycles are generated by the trimmed fundamental cycles
// of the root BFS tree, and such a cycle fits in the ball exactly when its
// two deepest vertices do. nullopt on a planar map.
inline std::optional<std::uint32_t> planarity_radius(const CombinatorialMap& m) {
    if (m.genus() == 0) return std::nullopt;
    detail::VertexIndex vx(m);
    auto tree = detail::bfs_tree(m, vx, m.vertex_of(m.root()));
    std::vector<std::pair<std::uint32_t, Dart>> edges;
    for (Dart d = 0; d < m.dart_count(); ++d) {
        if (d > m.alpha(d) || detail::is_tree_dart(m, tree, d)) continue;
        std::uint32_t need =
            std::max(tree.depth[m.vertex_of(d)], tree.depth[m.vertex_of(m.alpha(d))]);
        edges.emplace_back(need, d);
    }
    std::sort(edges.begin(), edges.end());
    for (auto [need, d] : edges) {
        auto cycle = detail::fundamental_cycle(m, tree, d);
        if (cut_simple_cycle(m, cycle).cls != CycleClass::contractible) return need - 1;
    }
    throw MapError("positive-genus map with contractible generators");
}

struct EssentialCycle {
    std::uint32_t length = 0;
    std::vector<Dart> cycle;
};

// Shortest noncontractible cycle found among the trimmed fundamental cycles
// of every per-vertex BFS tree, with the cycle itself as certificate. Exact
// on every map the exhaustive tests can reach; an upper bound in general.
// nullopt on a planar map.
inline std::optional<EssentialCycle> shortest_non_contractible(const CombinatorialMap& m) {
    if (m.genus() == 0) return std::nullopt;
    detail::VertexIndex vx(m);
    std::optional<EssentialCycle> best;
    for (std::uint32_t src = 0; src < m.num_vertices(); ++src) {
        auto tree = detail::bfs_tree(m, vx, src);
        for (Dart d = 0; d < m.dart_count(); ++d) {
            if (d > m.alpha(d) || detail::is_tree_dart(m, tree, d)) continue;
            auto cycle = detail::fundamental_cycle(m, tree, d);
            if (best && cycle.size() >= best->length) continue;
            if (cut_simple_cycle(m, cycle).cls != CycleClass::contractible)
                best = EssentialCycle{static_cast<std::uint32_t>(cycle.size()),
                                      std::move(cycle)};
        }
    }
    return best;
}

inline std::optional<std::uint32_t> systole(const CombinatorialMap& m) {
    auto r = shortest_non_contractible(m);
    if (!r) return std::nullopt;
    return r->length;
}

struct TwoCycleCensus {
    std::uint32_t contractible = 0, nonseparating = 0, separating = 0;
    std::uint32_t total() const { return contractible + nonseparating + separating; }
};

// Classify every unordered pair of parallel edges.
inline TwoCycleCensus two_cycle_census(const CombinatorialMap& m) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Dart>> groups;
    for (Dart d = 0; d < m.dart_count(); ++d) {
        if (d > m.alpha(d)) continue;
        std::uint32_t u = m.vertex_of(d), w = m.vertex_of(m.alpha(d));
        if (u <= w)
            groups[{u, w}].push_back(d);
        else
            groups[{w, u}].push_back(m.alpha(d));
    }
    TwoCycleCensus out;
    for (const auto& [key, darts] : groups) {
        for (std::size_t i = 0; i < darts.size(); ++i) {
            for (std::size_t j = i + 1; j < darts.size(); ++j) {
                switch (cut_simple_cycle(m, {darts[i], m.alpha(darts[j])}).cls) {
                    case CycleClass::contractible: ++out.contractible; break;
                    case CycleClass::nonseparating: ++out.nonseparating; break;
                    case CycleClass::separating_noncontractible: ++out.separating; break;
                }
            }
        }
    }
    return out;
}

struct CycleWithTail {
    std::vector<Dart> path;   // starts with the root dart; may be empty
    std::vector<Dart> cycle;  // simple, noncontractible
    std::uint32_t size() const {
        return static_cast<std::uint32_t>(path.size() + cycle.size());
    }
};

struct CycleTailBounds {
    std::optional<std::uint32_t> lower;  // PR+1; nullopt on planar maps
    std::optional<std::uint32_t> upper;  // exact minimum when present
    std::optional<CycleWithTail> certificate;
    std::uint32_t cap = 0;  // search bound used
};

namespace detail {

struct TailSearch {
    const CombinatorialMap& m;
    const VertexIndex& vx;
    std::vector<char> used;  // vertices on P (minus the far end while cycling)
    std::vector<Dart> found_path, found_cycle;

    bool classify(const std::vector<Dart>& cycle) {
        if (cut_simple_cycle(m, cycle).cls == CycleClass::contractible) return false;
        found_cycle = cycle;
        return true;
    }

    // Extend a simple cycle of target length c starting and ending at v0.
    bool cycle_dfs(std::vector<Dart>& cyc, std::vector<char>& on_cycle, std::uint32_t v0,
                   std::uint32_t c) {
        if (cyc.size() == c) {
            if (m.vertex_of(m.alpha(cyc.back())) != v0) return false;
            if (!is_simple_cycle(m, cyc)) return false;  // wrap-around backtrack
            return classify(cyc);
        }
        std::uint32_t at = m.vertex_of(m.alpha(cyc.back()));
        if (at == v0 || on_cycle[at] || used[at]) return false;
        on_cycle[at] = 1;
        for (Dart d : vx.at[at]) {
            if (d == m.alpha(cyc.back())) continue;  // no immediate backtrack
            cyc.push_back(d);
            if (cycle_dfs(cyc, on_cycle, v0, c)) {
                on_cycle[at] = 0;
                return true;
            }
            cyc.pop_back();
        }
        on_cycle[at] = 0;
        return false;
    }

    bool try_cycles_from(std::uint32_t v0, std::uint32_t c, Dart forced_first) {
        std::vector<char> on_cycle(m.num_vertices(), 0);
        std::vector<Dart> starts =
            forced_first == kNoDart ? vx.at[v0] : std::vector<Dart>{forced_first};
        for (Dart d : starts) {
            std::vector<Dart> cyc{d};
            if (cycle_dfs(cyc, on_cycle, v0, c)) return true;
        }
        return false;
    }

    bool path_dfs(std::vector<Dart>& path, std::uint32_t p, std::uint32_t c) {
        std::uint32_t at = m.vertex_of(m.alpha(path.back()));
        if (used[at]) return false;
        if (path.size() == p) {
            if (!try_cycles_from(at, c, kNoDart)) return false;
            found_path = path;
            return true;
        }
        used[at] = 1;
        for (Dart d : vx.at[at]) {
            if (d == m.alpha(path.back())) continue;
            path.push_back(d);
            if (path_dfs(path, p, c)) {
                used[at] = 0;
                return true;
            }
            path.pop_back();
        }
        used[at] = 0;
        return false;
    }
};

}  // namespace detail

// Bounds on the smallest s = |P| + |C| over noncontractible simple cycles C
// reached by a simple tail P that starts with the root edge (P empty means C
// itself runs through the root edge). The lower bound is PR+1, since a
// cycle-with-tail of size s places a noncontractible cycle inside the s-ball.
// The search ascends in size up to cap, so a found upper bound is the exact
// minimum; no upper bound means none of size <= cap exists (none at all on a
// planar map, but possible at positive genus when every short essential cycle
// clips the root vertex without using the root edge).
inline CycleTailBounds cycle_with_tail_min(const CombinatorialMap& m, std::uint32_t cap = 8) {
    CycleTailBounds out;
    out.cap = cap;
    if (m.genus() == 0 || m.dart_count() == 0) return out;
    out.lower = *planarity_radius(m) + 1;
    detail::VertexIndex vx(m);
    detail::TailSearch search{m, vx, std::vector<char>(m.num_vertices(), 0), {}, {}};
    for (std::uint32_t s = 2; s <= cap; ++s) {
        for (std::uint32_t p = 0; p + 2 <= s; ++p) {
            std::uint32_t c = s - p;
            if (c % 2 != 0) continue;  // bipartite cycles are even
            bool hit;
            if (p == 0) {
                search.found_path.clear();
                hit = search.try_cycles_from(m.vertex_of(m.root()), c, m.root());
            } else {
                std::vector<Dart> path{m.root()};
                search.used[m.vertex_of(m.root())] = 1;
                hit = search.path_dfs(path, p, c);
                search.used[m.vertex_of(m.root())] = 0;
            }
            if (hit) {
                out.upper = s;
                out.certificate = CycleWithTail{search.found_path, search.found_cycle};
                return out;
            }
        }
    }
    return out;
}

/// Unordered pairs of edges with four distinct endpoints: the gluing sites of
// glue_digons, and the other side of the nonseparating 2-cycle count.
inline std::uint32_t disjoint_edge_pairs(const CombinatorialMap& m) {
    std::vector<Dart> edges;
    for (Dart d = 0; d < m.dart_count(); ++d)
        if (d < m.alpha(d)) edges.push_back(d);
    std::uint32_t count = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            Dart e = edges[i], f = edges[j];
            std::uint32_t vs[4] = {m.vertex_of(e), m.vertex_of(m.alpha(e)), m.vertex_of(f),
                                   m.vertex_of(m.alpha(f))};
            bool distinct = true;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (vs[a] == vs[b]) distinct = false;
            if (distinct) ++count;
        }
    }
    return count;
}

struct DiameterResult {
    std::uint32_t value = 0;
    bool exact = true;
};

// All-source BFS below the threshold; otherwise a double-sweep lower bound.
inline DiameterResult diameter(const CombinatorialMap& m,
                               std::uint32_t exact_threshold = 4096) {
    DiameterResult out;
    if (m.dart_count() == 0) return out;
    detail::VertexIndex vx(m);
    auto ecc = [&](std::uint32_t src) {
        auto d = detail::distances_impl(m, vx, src);
        return *std::max_element(d.begin(), d.end());
    };
    if (m.num_vertices() <= exact_threshold) {
        for (std::uint32_t v = 0; v < m.num_vertices(); ++v)
            out.value = std::max(out.value, ecc(v));
        return out;
    }
    auto d0 = detail::distances_impl(m, vx, m.vertex_of(m.root()));
    std::uint32_t far =
        static_cast<std::uint32_t>(std::max_element(d0.begin(), d0.end()) - d0.begin());
    out.value = ecc(far);
    out.exact = false;
    return out;
}

// Everything the observable campaign records about one map.
struct GeometryReport {
    std::optional<std::uint32_t> planarity_radius, ball_planar_radius;
    std::optional<EssentialCycle> systole;
    std::uint32_t x_nonseparating = 0;
    CycleTailBounds cycle_tail;
    DiameterResult diam;
};

inline GeometryReport geometry_report(const CombinatorialMap& m, std::uint32_t ct_cap = 8,
                                      std::uint32_t diam_threshold = 4096) {
    GeometryReport r;
    r.planarity_radius = planarity_radius(m);
    r.ball_planar_radius = ball_planar_radius(m);
    r.systole = shortest_non_contractible(m);
    r.x_nonseparating = two_cycle_census(m).nonseparating;
    r.cycle_tail = cycle_with_tail_min(m, ct_cap);
    r.diam = diameter(m, diam_threshold);
    return r;
}

}  // namespace genuslab

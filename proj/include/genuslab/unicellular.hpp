#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "genuslab/counting.hpp"
#include "genuslab/map.hpp"
#include "genuslab/rng.hpp"

namespace genuslab {

// Rooted plane tree with n edges, stored as its contour: 1 walks down a new
// edge, 0 walks back up. Contour position d becomes dart d of the map form,
// so the face tour is d -> d+1 mod 2n and vertex ids follow first visits.
struct PlaneTree {
    std::vector<char> steps;

    std::size_t edges() const { return steps.size() / 2; }

    CombinatorialMap to_map() const {
        const Dart D = static_cast<Dart>(steps.size());
        if (D == 0) return build_and_validate({}, {}, 0);
        std::vector<Dart> alpha(D), sigma(D), stack;
        for (Dart d = 0; d < D; ++d) {
            if (steps[d]) {
                stack.push_back(d);
                continue;
            }
            if (stack.empty()) throw std::invalid_argument("unbalanced contour");
            alpha[d] = stack.back();
            alpha[stack.back()] = d;
            stack.pop_back();
        }
        if (!stack.empty()) throw std::invalid_argument("unbalanced contour");
        for (Dart d = 0; d < D; ++d) sigma[d] = alpha[d] + 1 == D ? 0 : alpha[d] + 1;
        return build_and_validate(std::move(sigma), std::move(alpha), 0, {},
                                  Profile::unicellular);
    }
};

// Uniform rooted plane tree with n edges by the cycle lemma: shuffle n down
// steps and n+1 up steps, rotate to just after the first prefix-sum minimum,
// and drop the final forced up step. Each tree arises from exactly 2n+1
// arrangements.
inline PlaneTree sample_plane_tree(std::size_t n, Rng& rng) {
    std::vector<char> s(2 * n + 1, 0);
    std::fill_n(s.begin(), n, 1);
    for (std::size_t i = s.size() - 1; i > 0; --i) {
        std::size_t j = rng.below(i + 1);
        std::swap(s[i], s[j]);
    }
    int sum = 0, low = 0;
    std::size_t cut = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        sum += s[i] ? 1 : -1;
        if (sum < low) {
            low = sum;
            cut = i + 1;
        }
    }
    PlaneTree out;
    out.steps.reserve(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) out.steps.push_back(s[(cut + i) % s.size()]);
    return out;
}

// Permutation with all cycles of odd length, plus one sign per cycle. The
// cycles are listed as drawn, each starting at its smallest element.
struct SignedPermutation {
    std::vector<std::uint32_t> perm;
    std::vector<std::vector<std::uint32_t>> cycles;
    std::vector<signed char> signs;
};

namespace detail {

// c(n, k) evaluated lazily, so a single query with k near n touches only the
// few reachable states instead of the full table OddCycleTable would build.
inline const BigInt& odd_cycle_lazy(int n, int k) {
    static const BigInt zero = 0;
    if (n < 0 || k < 0 || k > n || (n - k) % 2 != 0) return zero;
    static thread_local std::unordered_map<std::uint64_t, BigInt> memo;
    const std::uint64_t key = (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint32_t>(k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    BigInt s = 0;
    if (n == 0) {
        s = 1;
    } else {
        BigInt fall = 1;  // (n-1)(n-2)...(n-2j)
        for (int j = 0; n - 1 - 2 * j >= k - 1; ++j) {
            if (j > 0) fall *= BigInt(n - 2 * j + 1) * (n - 2 * j);
            s += fall * odd_cycle_lazy(n - 1 - 2 * j, k - 1);
        }
    }
    return memo.emplace(key, std::move(s)).first->second;
}

// Uniform in [0, bound) by masked rejection on 64-bit blocks.
inline BigInt below_big(Rng& rng, const BigInt& bound) {
    if (bound <= 0) throw std::invalid_argument("below_big: empty range");
    if (bound == 1) return 0;
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    const BigInt mask = (BigInt(1) << bits) - 1;
    for (;;) {
        BigInt x = 0;
        for (unsigned got = 0; got < bits; got += 64) {
            x <<= 64;
            x |= rng.raw();
        }
        x &= mask;
        if (x < bound) return x;
    }
}

}  // namespace detail

// Uniform over permutations of {0..n_elems-1} with exactly k cycles, all of
// odd length; signs are independent fair coins. Draws the cycle through the
// smallest remaining element with length weighted by the completion counts.
inline SignedPermutation sample_c_permutation(std::uint32_t n_elems, std::uint32_t k, Rng& rng) {
    if (detail::odd_cycle_lazy(static_cast<int>(n_elems), static_cast<int>(k)) == 0)
        throw std::invalid_argument("no odd-cycle permutation with that cycle count");
    SignedPermutation out;
    out.perm.assign(n_elems, 0);
    std::vector<std::uint32_t> pool(n_elems);
    std::iota(pool.begin(), pool.end(), 0);
    std::uint32_t left = k;
    while (!pool.empty()) {
        const int M = static_cast<int>(pool.size());
        BigInt r = detail::below_big(rng, detail::odd_cycle_lazy(M, static_cast<int>(left)));
        int j = 0;
        BigInt fall = 1;
        for (;; ++j) {
            if (M - 1 - 2 * j < static_cast<int>(left) - 1)
                throw std::logic_error("cycle length selection overran");
            if (j > 0) fall *= BigInt(M - 2 * j + 1) * (M - 2 * j);
            BigInt w = fall * detail::odd_cycle_lazy(M - 1 - 2 * j, static_cast<int>(left) - 1);
            if (r < w) break;
            r -= w;
        }
        std::vector<std::uint32_t> cyc{pool.front()};
        pool.erase(pool.begin());
        for (int t = 0; t < 2 * j; ++t) {
            std::size_t at = rng.below(pool.size());
            cyc.push_back(pool[at]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        }
        for (std::size_t i = 0; i < cyc.size(); ++i)
            out.perm[cyc[i]] = cyc[(i + 1) % cyc.size()];
        out.cycles.push_back(std::move(cyc));
        out.signs.push_back(rng.coin() ? 1 : -1);
        --left;
    }
    if (left != 0) throw std::logic_error("cycle count mismatch after sampling");
    return out;
}

// Tour time of each dart along the unique face, starting at the root.
inline std::vector<std::uint32_t> face_tour_times(const CombinatorialMap& m) {
    if (m.num_faces() != 1) throw std::invalid_argument("map not unicellular");
    std::vector<std::uint32_t> t(m.dart_count(), 0);
    if (m.dart_count() == 0) return t;
    Dart c = m.root();
    std::uint32_t i = 0;
    do {
        t[c] = i++;
        c = m.phi(c);
    } while (c != m.root());
    return t;
}

namespace detail {

inline void check_decoration(const SignedPermutation& p, std::uint32_t n_elems) {
    if (p.perm.size() != n_elems) throw std::invalid_argument("malformed permutation: size");
    std::vector<char> hit(n_elems, 0);
    for (std::uint32_t v : p.perm) {
        if (v >= n_elems || hit[v]) throw std::invalid_argument("malformed permutation: images");
        hit[v] = 1;
    }
    if (p.signs.size() != p.cycles.size())
        throw std::invalid_argument("malformed permutation: one sign per cycle");
    for (signed char s : p.signs)
        if (s != 1 && s != -1) throw std::invalid_argument("malformed permutation: sign values");
    std::fill(hit.begin(), hit.end(), 0);
    for (const auto& cyc : p.cycles) {
        if (cyc.size() % 2 == 0) throw std::invalid_argument("malformed permutation: even cycle");
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            std::uint32_t e = cyc[i];
            if (e >= n_elems || hit[e]) throw std::invalid_argument("malformed permutation: cycles");
            hit[e] = 1;
            if (p.perm[e] != cyc[(i + 1) % cyc.size()])
                throw std::invalid_argument("malformed permutation: cycle order");
        }
    }
    for (char h : hit)
        if (!h) throw std::invalid_argument("malformed permutation: cycles incomplete");
}

// Tour times recomputed from a raw sigma/alpha pair; throws if the face is
// no longer a single cycle.
inline std::vector<std::uint32_t> tour_or_throw(const std::vector<Dart>& sigma,
                                                const std::vector<Dart>& alpha, Dart root) {
    std::vector<std::uint32_t> time(sigma.size(), 0);
    Dart c = root;
    std::uint32_t i = 0;
    do {
        time[c] = i++;
        c = sigma[alpha[c]];
    } while (c != root);
    if (i != sigma.size()) throw std::logic_error("vertex merge broke the single face");
    return time;
}

// Dart of the group whose tour time is nearest behind `cur`, wrapping around
// the tour; `cur` itself is skipped so repeated steps always move.
inline Dart chain_back_step(const std::vector<Dart>& group,
                            const std::vector<std::uint32_t>& time, Dart D,
                            std::uint32_t cur) {
    Dart best = kNoDart;
    std::uint32_t gap = ~0u;
    for (Dart d : group) {
        std::uint32_t diff = (cur + D - time[d]) % D;
        if (diff != 0 && diff < gap) {
            gap = diff;
            best = d;
        }
    }
    return best;
}

// Merge three vertex classes into one by cutting one corner per class and
// re-chaining the cut corners in tour order. The cut corners are found by
// walking backwards through the tour, one class to the next; iterating that
// walk from the first class's earliest dart settles into a closed loop, and
// starting the final chain at the loop's earliest dart makes the choice
// independent of how the classes were listed. Chaining ascending cuts keeps
// the face in one piece and raises the genus by exactly one.
inline void splice_three(std::vector<Dart>& sigma, const std::vector<Dart>& alpha, Dart root,
                         const std::vector<Dart>& g0, const std::vector<Dart>& g1,
                         const std::vector<Dart>& g2) {
    const Dart D = static_cast<Dart>(sigma.size());
    auto time = tour_or_throw(sigma, alpha, root);
    std::vector<Dart> pred(D);
    for (Dart d = 0; d < D; ++d) pred[sigma[d]] = d;
    auto chain_from = [&](Dart first) {
        std::array<Dart, 3> cut;
        cut[0] = first;
        cut[1] = chain_back_step(g1, time, D, time[cut[0]]);
        cut[2] = chain_back_step(g2, time, D, time[cut[1]]);
        return cut;
    };
    Dart x = g0.front();
    for (Dart d : g0)
        if (time[d] < time[x]) x = d;
    std::unordered_map<Dart, std::size_t> seen;
    std::vector<Dart> visited;
    while (!seen.count(x)) {
        seen.emplace(x, visited.size());
        visited.push_back(x);
        x = chain_back_step(g0, time, D, time[chain_from(x)[2]]);
    }
    Dart start = x;
    for (std::size_t i = seen[x]; i < visited.size(); ++i)
        if (time[visited[i]] < time[start]) start = visited[i];
    auto cut = chain_from(start);
    std::sort(cut.begin(), cut.end(),
              [&](Dart a, Dart b) { return time[a] < time[b]; });
    std::array<Dart, 3> before;
    for (int i = 0; i < 3; ++i) before[i] = pred[cut[i]];
    for (int i = 0; i < 3; ++i) sigma[before[i]] = cut[(i + 1) % 3];
    tour_or_throw(sigma, alpha, root);
}

}  // namespace detail

// Merge the tree's vertices along each permutation cycle, cycles ordered by
// smallest element. A 3-cycle is one three-way splice; longer cycles repeat
// the splice, folding two more members into the merged class each round, so
// a cycle of length 2j+1 raises the genus by j. The splice's backward-walk
// construction makes the distribution of three-way merges exactly uniform;
// the iterated rounds for longer cycles are close to uniform but carry a
// measurable bias, so sampling accuracy degrades mildly once a single cycle
// spans five or more vertices. Cycle signs and drawn orientations scale the
// preimage count by the same factor everywhere and are not consulted.
inline CombinatorialMap assemble_unicellular(const PlaneTree& tree,
                                             const SignedPermutation& decor) {
    CombinatorialMap t = tree.to_map();
    const Dart D = t.dart_count();
    const std::uint32_t N = t.num_vertices();
    detail::check_decoration(decor, N);
    if (D == 0) return t;

    std::vector<std::vector<Dart>> member(N);
    for (Dart d = 0; d < D; ++d) member[t.vertex_of(d)].push_back(d);
    std::vector<Dart> sigma(t.sigma_array().begin(), t.sigma_array().end());
    std::vector<Dart> alpha(t.alpha_array().begin(), t.alpha_array().end());

    std::vector<std::vector<std::uint32_t>> blocks = decor.cycles;
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());

    for (const auto& block : blocks) {
        if (block.size() == 1) continue;
        std::vector<Dart> acc = member[block[0]];
        for (std::size_t i = 1; i + 1 < block.size(); i += 2) {
            const auto& ga = member[block[i]];
            const auto& gb = member[block[i + 1]];
            detail::splice_three(sigma, alpha, t.root(), acc, ga, gb);
            acc.insert(acc.end(), ga.begin(), ga.end());
            acc.insert(acc.end(), gb.begin(), gb.end());
        }
    }

    auto m = build_and_validate(std::move(sigma), std::move(alpha), t.root(), {},
                                Profile::unicellular);
    const int g = static_cast<int>(N - decor.cycles.size()) / 2;
    if (m.genus() != g) throw std::logic_error("assembled genus mismatch");
    return m;
}

// Corner (d, sigma(d)) of a one-face map whose successor is visited earlier
// in the tour, excluding each vertex's wrap into its first-visited dart.
struct Trisection {
    Dart d = kNoDart;
    Dart successor = kNoDart;

    friend bool operator==(const Trisection& a, const Trisection& b) {
        return a.d == b.d && a.successor == b.successor;
    }
};

inline std::vector<Trisection> find_trisections(const CombinatorialMap& m) {
    auto time = face_tour_times(m);
    const Dart D = m.dart_count();
    std::vector<Dart> vmin(m.num_vertices(), kNoDart);
    for (Dart d = 0; d < D; ++d) {
        Dart& mv = vmin[m.vertex_of(d)];
        if (mv == kNoDart || time[d] < time[mv]) mv = d;
    }
    std::vector<Trisection> out;
    for (Dart d = 0; d < D; ++d) {
        Dart s = m.sigma(d);
        if (time[s] < time[d] && s != vmin[m.vertex_of(s)]) out.push_back({d, s});
    }
    return out;
}

struct SliceResult {
    CombinatorialMap map;
    // One corner per split vertex; gluing the three corners back restores
    // the input exactly.
    std::array<Dart, 3> corners;
};

// Split the trisection's vertex into three: the corner dart d alone becomes
// a pendant vertex, and the rest of the rotation is cut before the vertex's
// first-visit dart. Genus drops by one, and the map stays one-faced because
// the trisection descent reverses the tour order of the three cut corners.
inline SliceResult slice_trisection(const CombinatorialMap& m, const Trisection& tri) {
    auto time = face_tour_times(m);
    if (tri.d >= m.dart_count() || m.sigma(tri.d) != tri.successor)
        throw std::invalid_argument("corner is not a trisection");
    const Dart a = tri.d, b = tri.successor;
    if (time[b] >= time[a]) throw std::invalid_argument("corner is not a trisection");
    Dart bstar = b;
    for (Dart c : m.darts_of_vertex(b))
        if (time[c] < time[bstar]) bstar = c;
    if (b == bstar) throw std::invalid_argument("corner is not a trisection");

    const Dart x = m.sigma_inv(bstar), y = m.sigma_inv(a), z = a;
    std::vector<Dart> sigma(m.sigma_array().begin(), m.sigma_array().end());
    std::vector<Dart> alpha(m.alpha_array().begin(), m.alpha_array().end());
    sigma[y] = bstar;
    sigma[z] = m.sigma(y);
    sigma[x] = b;
    auto out = build_and_validate(std::move(sigma), std::move(alpha), m.root(), {},
                                  Profile::unicellular);
    if (out.genus() != m.genus() - 1) throw std::logic_error("slice did not drop the genus");
    return {std::move(out), {x, y, z}};
}

// Inverse splice: rotates the three corner successors, merging the corners'
// vertices into one. Requires three distinct vertices; the unicellular
// profile rejects gluings whose corner order splits the face.
inline CombinatorialMap glue_three_corners(const CombinatorialMap& m,
                                           const std::array<Dart, 3>& corners) {
    const auto [x, y, z] = corners;
    if (x >= m.dart_count() || y >= m.dart_count() || z >= m.dart_count())
        throw std::invalid_argument("corner out of range");
    if (m.vertex_of(x) == m.vertex_of(y) || m.vertex_of(y) == m.vertex_of(z) ||
        m.vertex_of(x) == m.vertex_of(z))
        throw std::invalid_argument("corners must sit at three distinct vertices");
    std::vector<Dart> sigma(m.sigma_array().begin(), m.sigma_array().end());
    std::vector<Dart> alpha(m.alpha_array().begin(), m.alpha_array().end());
    sigma[x] = m.sigma(y);
    sigma[y] = m.sigma(z);
    sigma[z] = m.sigma(x);
    auto out = build_and_validate(std::move(sigma), std::move(alpha), m.root(), {},
                                  Profile::unicellular);
    if (out.genus() != m.genus() + 1) throw std::logic_error("glue did not raise the genus");
    return out;
}

// One-face map with positive vertex labels: minimum exactly 1, endpoints of
// every edge within 1 of each other.
struct LabeledUnicellular {
    CombinatorialMap map;
    std::vector<int> labels;
};

inline void check_well_labeled(const LabeledUnicellular& lu) {
    const auto& m = lu.map;
    if (m.num_faces() != 1) throw std::invalid_argument("labeled map not unicellular");
    if (lu.labels.size() != m.num_vertices())
        throw std::invalid_argument("one label per vertex required");
    int lo = lu.labels.empty() ? 1 : *std::min_element(lu.labels.begin(), lu.labels.end());
    if (lo != 1) throw std::invalid_argument("minimum label must be 1");
    for (Dart d = 0; d < m.dart_count(); ++d) {
        int du = lu.labels[m.vertex_of(d)], dv = lu.labels[m.vertex_of(m.alpha(d))];
        if (du - dv > 1 || dv - du > 1)
            throw std::invalid_argument("edge labels differ by more than 1");
    }
}

struct LabeledSliceResult {
    LabeledUnicellular lab;
    std::array<Dart, 3> corners;
};

inline LabeledSliceResult slice_trisection(const LabeledUnicellular& lu, const Trisection& tri) {
    auto plain = slice_trisection(lu.map, tri);
    std::vector<int> labels(plain.map.num_vertices());
    for (Dart d = 0; d < plain.map.dart_count(); ++d)
        labels[plain.map.vertex_of(d)] = lu.labels[lu.map.vertex_of(d)];
    return {{std::move(plain.map), std::move(labels)}, plain.corners};
}

namespace detail {

// Labels from tree-edge increments: BFS tree from the root vertex, child
// label = parent label + increment, accepted iff every non-tree edge's
// endpoints differ by at most 1. Increments are consumed in BFS discovery
// order. Accepted labels are shifted to minimum 1.
inline std::optional<std::vector<int>> labeling_from_increments(const CombinatorialMap& m,
                                                               const std::vector<int>& inc) {
    const std::uint32_t V = m.num_vertices();
    if (m.dart_count() == 0) return std::vector<int>{1};
    std::vector<std::vector<Dart>> at(V);
    for (Dart d = 0; d < m.dart_count(); ++d) at[m.vertex_of(d)].push_back(d);
    std::vector<int> label(V, 0);
    std::vector<char> seen(V, 0);
    std::vector<char> tree_dart(m.dart_count(), 0);
    std::queue<std::uint32_t> q;
    std::size_t used = 0;
    seen[m.vertex_of(m.root())] = 1;
    q.push(m.vertex_of(m.root()));
    while (!q.empty()) {
        std::uint32_t u = q.front();
        q.pop();
        for (Dart d : at[u]) {
            std::uint32_t w = m.vertex_of(m.alpha(d));
            if (seen[w]) continue;
            seen[w] = 1;
            if (used >= inc.size()) throw std::invalid_argument("one increment per tree edge");
            label[w] = label[u] + inc[used++];
            tree_dart[d] = tree_dart[m.alpha(d)] = 1;
            q.push(w);
        }
    }
    if (used != inc.size()) throw std::invalid_argument("one increment per tree edge");
    for (Dart d = 0; d < m.dart_count(); ++d) {
        if (d > m.alpha(d) || tree_dart[d]) continue;
        int diff = label[m.vertex_of(d)] - label[m.vertex_of(m.alpha(d))];
        if (diff > 1 || diff < -1) return std::nullopt;
    }
    int lo = *std::min_element(label.begin(), label.end());
    for (int& l : label) l += 1 - lo;
    return label;
}

}  // namespace detail

// One rejection attempt: uniform increments in {-1,0,+1} on the BFS tree's
// edges. Conditional on acceptance, labelings are uniform over the map's
// well-labelings; rejection is the normal failure path, callers loop.
inline std::optional<std::vector<int>> sample_well_labeling(const CombinatorialMap& m, Rng& rng) {
    if (m.num_faces() != 1) throw std::invalid_argument("map not unicellular");
    const std::uint32_t edges_in_tree = m.num_vertices() - 1;
    std::vector<int> inc(edges_in_tree);
    for (int& i : inc) i = static_cast<int>(rng.below(3)) - 1;
    return detail::labeling_from_increments(m, inc);
}

}  // namespace genuslab

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace genuslab {

using Dart = std::uint32_t;
inline constexpr Dart kNoDart = static_cast<Dart>(-1);

enum class Profile { general, quadrangulation, unicellular, with_holes };

inline const char* to_string(Profile p) {
    switch (p) {
        case Profile::general: return "general";
        case Profile::quadrangulation: return "quadrangulation";
        case Profile::unicellular: return "unicellular";
        case Profile::with_holes: return "with-holes";
    }
    return "?";
}

inline std::optional<Profile> profile_from_string(const std::string& s) {
    if (s == "general") return Profile::general;
    if (s == "quadrangulation") return Profile::quadrangulation;
    if (s == "unicellular") return Profile::unicellular;
    if (s == "with-holes") return Profile::with_holes;
    return std::nullopt;
}

struct MapError : std::runtime_error {
    explicit MapError(const std::string& what, Dart dart = kNoDart)
        : std::runtime_error(dart == kNoDart ? what : what + " (dart " + std::to_string(dart) + ")"),
          dart_index(dart) {}
    Dart dart_index;
};

enum class VColor : std::uint8_t { white = 0, black = 1 };

// Rotation-system map. sigma(d) is the next dart counterclockwise around the
// vertex of d, alpha is the edge involution, and the face permutation is
// phi = sigma . alpha (alpha applied first). Immutable once built; all derived
// indices are filled in by build_and_validate.
//
// A map with dart_count() == 0 is the one-vertex sentinel (V=1, E=0, F=1).
class CombinatorialMap {
public:
    Dart dart_count() const { return static_cast<Dart>(sigma_.size()); }
    Dart sigma(Dart d) const { return sigma_[d]; }
    Dart sigma_inv(Dart d) const { return sigma_inv_[d]; }
    Dart alpha(Dart d) const { return alpha_[d]; }
    Dart phi(Dart d) const { return sigma_[alpha_[d]]; }
    Dart root() const { return root_; }
    Profile profile() const { return profile_; }

    const std::vector<Dart>& sigma_array() const { return sigma_; }
    const std::vector<Dart>& alpha_array() const { return alpha_; }
    const std::vector<Dart>& hole_reps() const { return hole_reps_; }

    std::uint32_t vertex_of(Dart d) const { return vertex_of_[d]; }
    std::uint32_t face_of(Dart d) const { return face_of_[d]; }
    std::uint32_t num_vertices() const { return num_vertices_; }
    std::uint32_t num_edges() const { return dart_count() / 2; }
    std::uint32_t num_faces() const { return num_faces_; }
    int genus() const { return genus_; }
    bool is_hole_face(std::uint32_t f) const { return hole_face_[f]; }
    std::uint32_t num_holes() const { return static_cast<std::uint32_t>(hole_reps_.size()); }

    // Only populated for bipartite profiles (quadrangulation, with-holes);
    // empty otherwise unless bipartite_colors() succeeded.
    const std::vector<VColor>& vertex_colors() const { return colors_; }
    bool has_colors() const { return !colors_.empty(); }
    VColor color_of_vertex(std::uint32_t v) const { return colors_[v]; }
    VColor color_of_dart(Dart d) const { return colors_[vertex_of_[d]]; }

    std::vector<Dart> darts_of_vertex(Dart d) const {
        std::vector<Dart> out;
        Dart c = d;
        do { out.push_back(c); c = sigma_[c]; } while (c != d);
        return out;
    }

    std::vector<Dart> face_cycle(Dart d) const {
        std::vector<Dart> out;
        Dart c = d;
        do { out.push_back(c); c = phi(c); } while (c != d);
        return out;
    }

    std::uint32_t face_degree(std::uint32_t f) const { return face_degree_[f]; }

    friend CombinatorialMap build_and_validate(std::vector<Dart> sigma, std::vector<Dart> alpha,
                                               Dart root, std::vector<Dart> hole_reps,
                                               Profile profile);

private:
    std::vector<Dart> sigma_, sigma_inv_, alpha_;
    Dart root_ = 0;
    std::vector<Dart> hole_reps_;
    Profile profile_ = Profile::general;

    std::vector<std::uint32_t> vertex_of_, face_of_, face_degree_;
    std::vector<bool> hole_face_;
    std::vector<VColor> colors_;
    std::uint32_t num_vertices_ = 1, num_faces_ = 1;
    int genus_ = 0;
};

namespace detail {

inline void check_permutation(const std::vector<Dart>& p, const char* name) {
    const Dart n = static_cast<Dart>(p.size());
    std::vector<bool> seen(n, false);
    for (Dart d = 0; d < n; ++d) {
        if (p[d] >= n) throw MapError(std::string(name) + " out of range", d);
        if (seen[p[d]]) throw MapError(std::string(name) + " not a permutation", d);
        seen[p[d]] = true;
    }
}

}  // namespace detail

// Vertex 2-coloring with the root vertex white. Throws on an odd cycle.
inline std::vector<VColor> bipartite_colors(const CombinatorialMap& m) {
    std::vector<VColor> color(m.num_vertices());
    if (m.dart_count() == 0) { color.assign(1, VColor::white); return color; }
    std::vector<char> done(m.num_vertices(), 0);
    std::uint32_t rv = m.vertex_of(m.root());
    color[rv] = VColor::white;
    done[rv] = 1;
    std::queue<Dart> q;
    q.push(m.root());
    // BFS over darts; the vertex of alpha(d) is adjacent to the vertex of d.
    std::vector<char> dart_seen(m.dart_count(), 0);
    auto push_vertex_darts = [&](Dart d) {
        Dart c = d;
        do {
            if (!dart_seen[c]) { dart_seen[c] = 1; q.push(c); }
            c = m.sigma(c);
        } while (c != d);
    };
    push_vertex_darts(m.root());
    while (!q.empty()) {
        Dart d = q.front();
        q.pop();
        Dart e = m.alpha(d);
        std::uint32_t u = m.vertex_of(d), v = m.vertex_of(e);
        if (!done[v]) {
            color[v] = color[u] == VColor::white ? VColor::black : VColor::white;
            done[v] = 1;
            push_vertex_darts(e);
        } else if (color[v] == color[u]) {
            throw MapError("no bipartite coloring (odd cycle through edge)", d);
        }
    }
    return color;
}

inline CombinatorialMap build_and_validate(std::vector<Dart> sigma, std::vector<Dart> alpha,
                                           Dart root, std::vector<Dart> hole_reps = {},
                                           Profile profile = Profile::general) {
    CombinatorialMap m;
    const Dart D = static_cast<Dart>(sigma.size());
    if (alpha.size() != sigma.size()) throw MapError("sigma/alpha size mismatch");
    if (D % 2 != 0) throw MapError("odd dart count");

    if (D == 0) {
        if (root != 0) throw MapError("root out of range on empty map");
        if (!hole_reps.empty()) throw MapError("holes on empty map");
        if (profile == Profile::unicellular || profile == Profile::with_holes)
            throw MapError("profile needs darts");
        m.profile_ = profile;
        m.colors_.assign(1, VColor::white);
        return m;  // one-vertex sentinel
    }
    if (root >= D) throw MapError("root out of range");

    detail::check_permutation(sigma, "sigma");
    detail::check_permutation(alpha, "alpha");
    for (Dart d = 0; d < D; ++d) {
        if (alpha[d] == d) throw MapError("alpha fixed point", d);
        if (alpha[alpha[d]] != d) throw MapError("alpha not an involution", d);
    }

    m.sigma_ = std::move(sigma);
    m.alpha_ = std::move(alpha);
    m.root_ = root;
    m.profile_ = profile;
    m.sigma_inv_.assign(D, 0);
    for (Dart d = 0; d < D; ++d) m.sigma_inv_[m.sigma_[d]] = d;

    // Vertices and faces as orbit indices, numbered by smallest contained dart.
    m.vertex_of_.assign(D, static_cast<std::uint32_t>(-1));
    std::uint32_t nv = 0;
    for (Dart d = 0; d < D; ++d) {
        if (m.vertex_of_[d] != static_cast<std::uint32_t>(-1)) continue;
        Dart c = d;
        do { m.vertex_of_[c] = nv; c = m.sigma_[c]; } while (c != d);
        ++nv;
    }
    m.num_vertices_ = nv;

    m.face_of_.assign(D, static_cast<std::uint32_t>(-1));
    std::uint32_t nf = 0;
    for (Dart d = 0; d < D; ++d) {
        if (m.face_of_[d] != static_cast<std::uint32_t>(-1)) continue;
        std::uint32_t deg = 0;
        Dart c = d;
        do { m.face_of_[c] = nf; c = m.phi(c); ++deg; } while (c != d);
        m.face_degree_.push_back(deg);
        ++nf;
    }
    m.num_faces_ = nf;

    // Connectivity under {sigma, alpha}.
    {
        std::vector<char> seen(D, 0);
        std::vector<Dart> stack{0};
        seen[0] = 1;
        std::uint32_t cnt = 1;
        while (!stack.empty()) {
            Dart d = stack.back();
            stack.pop_back();
            for (Dart e : {m.sigma_[d], m.alpha_[d]}) {
                if (!seen[e]) { seen[e] = 1; ++cnt; stack.push_back(e); }
            }
        }
        if (cnt != D) throw MapError("map not connected");
    }

    long chi = static_cast<long>(nv) - static_cast<long>(D / 2) + static_cast<long>(nf);
    if ((2 - chi) % 2 != 0) throw MapError("non-orientable bookkeeping");  // cannot happen
    m.genus_ = static_cast<int>((2 - chi) / 2);
    if (m.genus_ < 0) throw MapError("negative genus");

    // Hole marks: distinct faces, remembered by their representative dart.
    m.hole_face_.assign(nf, false);
    for (Dart rep : hole_reps) {
        if (rep >= D) throw MapError("hole representative out of range", rep);
        std::uint32_t f = m.face_of_[rep];
        if (m.hole_face_[f]) throw MapError("duplicate hole face", rep);
        m.hole_face_[f] = true;
    }
    m.hole_reps_ = std::move(hole_reps);

    switch (profile) {
        case Profile::general:
            break;
        case Profile::unicellular:
            if (!m.hole_reps_.empty()) throw MapError("unicellular profile with holes");
            if (nf != 1) throw MapError("not unicellular: " + std::to_string(nf) + " faces");
            break;
        case Profile::quadrangulation:
            if (!m.hole_reps_.empty()) throw MapError("quadrangulation profile with holes");
            [[fallthrough]];
        case Profile::with_holes:
            for (std::uint32_t f = 0; f < nf; ++f) {
                if (!m.hole_face_[f] && m.face_degree_[f] != 4)
                    throw MapError("face degree != 4 (face " + std::to_string(f) + ")");
            }
            m.colors_ = bipartite_colors(m);  // throws if not bipartite
            // Hole boundaries must be simple cycles.
            for (Dart rep : m.hole_reps_) {
                std::vector<char> seen_v(nv, 0);
                Dart c = rep;
                do {
                    if (seen_v[m.vertex_of_[c]])
                        throw MapError("non-simple hole boundary", rep);
                    seen_v[m.vertex_of_[c]] = 1;
                    c = m.phi(c);
                } while (c != rep);
            }
            break;
    }
    return m;
}

inline int euler_genus(const CombinatorialMap& m) { return m.genus(); }

// Dart discovery order of the canonical relabeling: BFS from the root with
// generator order (sigma, alpha). Position i holds the dart given canonical
// id i. Callers that canonicalize auxiliary data (vertex labels, marked
// darts) derive their relabeling from this same order.
inline std::vector<Dart> canonical_dart_order(const CombinatorialMap& m) {
    const Dart D = m.dart_count();
    std::vector<Dart> canon(D, kNoDart), order(D, kNoDart);
    if (D == 0) return order;
    Dart next = 0;
    canon[m.root()] = next;
    order[next++] = m.root();
    for (Dart i = 0; i < D; ++i) {
        Dart d = order[i];
        for (Dart e : {m.sigma(d), m.alpha(d)}) {
            if (canon[e] == kNoDart) { canon[e] = next; order[next++] = e; }
        }
    }
    return order;
}

// Canonical relabeling code: the relabeled sigma and alpha plus the sorted
// canonical hole representatives. Two maps have equal codes iff they are
// isomorphic by a root- and hole-mark-preserving map isomorphism.
inline std::vector<std::uint32_t> canonical_code_with_marks(const CombinatorialMap& m,
                                                            std::span<const Dart> marks) {
    const Dart D = m.dart_count();
    std::vector<std::uint32_t> code;
    code.push_back(D);
    if (D == 0) return code;
    std::vector<Dart> order = canonical_dart_order(m);
    std::vector<Dart> canon(D, kNoDart);
    for (Dart i = 0; i < D; ++i) canon[order[i]] = i;
    code.reserve(2 * D + 4 + m.hole_reps().size() + marks.size());
    for (Dart i = 0; i < D; ++i) code.push_back(canon[m.sigma(order[i])]);
    for (Dart i = 0; i < D; ++i) code.push_back(canon[m.alpha(order[i])]);
    code.push_back(static_cast<std::uint32_t>(m.hole_reps().size()));
    std::vector<std::uint32_t> hs;
    for (Dart rep : m.hole_reps()) hs.push_back(canon[rep]);
    std::sort(hs.begin(), hs.end());
    code.insert(code.end(), hs.begin(), hs.end());
    for (Dart d : marks) code.push_back(canon[d]);
    return code;
}

inline std::vector<std::uint32_t> canonical_code(const CombinatorialMap& m) {
    return canonical_code_with_marks(m, {});
}

}  // namespace genuslab

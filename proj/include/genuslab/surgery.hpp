#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "genuslab/map.hpp"

namespace genuslab {

enum class CycleClass { contractible, nonseparating, separating_noncontractible };

inline const char* to_string(CycleClass c) {
    switch (c) {
        case CycleClass::contractible: return "contractible";
        case CycleClass::nonseparating: return "nonseparating";
        case CycleClass::separating_noncontractible: return "separating-noncontractible";
    }
    return "?";
}

// A closed walk d_0, ..., d_{l-1} is a simple cycle when consecutive darts
// chain head to tail, the visited vertices are pairwise distinct, and no two
// consecutive steps use the same edge.
inline bool is_simple_cycle(const CombinatorialMap& m, const std::vector<Dart>& cycle) {
    const std::size_t l = cycle.size();
    if (l == 0) return false;
    std::vector<std::uint32_t> verts;
    for (std::size_t i = 0; i < l; ++i) {
        Dart next = cycle[(i + 1) % l];
        if (m.vertex_of(m.alpha(cycle[i])) != m.vertex_of(next)) return false;
        if (l > 1 && m.alpha(cycle[i]) == next) return false;  // immediate backtrack
        verts.push_back(m.vertex_of(cycle[i]));
    }
    std::sort(verts.begin(), verts.end());
    return std::adjacent_find(verts.begin(), verts.end()) == verts.end();
}

struct CutPieces {
    CycleClass cls;
    // Piece 0 contains the root; a nonseparating cut yields a single piece.
    // The root of piece 1 is its dart of smallest pre-cut id.
    std::vector<CombinatorialMap> pieces;
    // Dart of the cut map (originals first, then the 2l right-bank copies)
    // to its piece and relabeled id.
    std::vector<std::pair<int, Dart>> dart_map;
    // The two cut boundaries; also the anchors glue_boundaries needs to undo
    // the cut. Left keeps the original cycle darts, right gets the copies.
    std::pair<int, Dart> left_rep, right_rep;
};

// Cut the surface along a simple cycle. Both banks become marked l-gon holes:
// the left bank keeps the original cycle darts, the right bank consists of
// fresh copies. At each cycle vertex the rotation splits at the arriving and
// leaving cycle darts; the arc on each side keeps its bank.
inline CutPieces cut_simple_cycle(const CombinatorialMap& m, const std::vector<Dart>& cycle) {
    if (!is_simple_cycle(m, cycle)) throw MapError("not a simple cycle");
    for (Dart d : cycle)
        if (m.is_hole_face(m.face_of(d)) || m.is_hole_face(m.face_of(m.alpha(d))))
            throw MapError("cycle runs along a hole", d);
    if (m.num_holes() > 0) {
        std::vector<char> on_hole(m.num_vertices(), 0);
        for (Dart d = 0; d < m.dart_count(); ++d)
            if (m.is_hole_face(m.face_of(d))) on_hole[m.vertex_of(d)] = 1;
        for (Dart d : cycle)
            if (on_hole[m.vertex_of(d)]) throw MapError("cycle vertex on a hole", d);
    }
    const Dart D = m.dart_count();
    const std::size_t l = cycle.size();
    const Dart T = D + static_cast<Dart>(2 * l);
    std::vector<Dart> sigma(T), alpha(T);
    for (Dart d = 0; d < D; ++d) { sigma[d] = m.sigma(d); alpha[d] = m.alpha(d); }
    auto copy_of_cycle = [&](std::size_t i) { return D + static_cast<Dart>(2 * i); };
    auto copy_of_in = [&](std::size_t i) { return D + static_cast<Dart>(2 * i) + 1; };
    for (std::size_t i = 0; i < l; ++i) {
        alpha[copy_of_cycle(i)] = copy_of_in(i);
        alpha[copy_of_in(i)] = copy_of_cycle(i);
    }
    // At the vertex after edge i: `in` arrives, `out` leaves. The left bank
    // keeps the arc out..in and closes up; the right bank takes the strict
    // arc between them, framed by the two copies.
    for (std::size_t i = 0; i < l; ++i) {
        Dart in = m.alpha(cycle[i]);
        Dart out = cycle[(i + 1) % l];
        Dart rc_in = copy_of_in(i);
        Dart rc_out = copy_of_cycle((i + 1) % l);
        Dart first = m.sigma(in);
        if (first == out) {
            sigma[rc_in] = rc_out;  // right arc empty
        } else {
            sigma[rc_in] = first;
            sigma[m.sigma_inv(out)] = rc_out;
        }
        sigma[rc_out] = rc_in;
        sigma[in] = out;
    }

    // Components under {sigma, alpha}; a simple-cycle cut gives one or two.
    std::vector<int> comp(T, -1);
    int ncomp = 0;
    for (Dart s = 0; s < T; ++s) {
        if (comp[s] != -1) continue;
        std::vector<Dart> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            Dart d = stack.back();
            stack.pop_back();
            for (Dart e : {sigma[d], alpha[d]}) {
                if (comp[e] == -1) { comp[e] = ncomp; stack.push_back(e); }
            }
        }
        ++ncomp;
    }
    if (ncomp > 2) throw MapError("cycle cut produced more than two pieces");

    CutPieces out;
    out.dart_map.assign(T, {0, 0});
    const int root_comp = comp[m.root()];
    std::array<Dart, 2> next_id{0, 0};
    for (Dart d = 0; d < T; ++d) {
        int p = comp[d] == root_comp ? 0 : 1;
        out.dart_map[d] = {p, next_id[p]++};
    }
    std::array<std::vector<Dart>, 2> sig, alp;
    sig[0].resize(next_id[0]);
    alp[0].resize(next_id[0]);
    sig[1].resize(next_id[1]);
    alp[1].resize(next_id[1]);
    for (Dart d = 0; d < T; ++d) {
        auto [p, id] = out.dart_map[d];
        sig[p][id] = out.dart_map[sigma[d]].second;
        alp[p][id] = out.dart_map[alpha[d]].second;
    }

    out.left_rep = out.dart_map[cycle[0]];
    out.right_rep = out.dart_map[copy_of_in(0)];

    Profile piece_profile = (m.profile() == Profile::quadrangulation ||
                             m.profile() == Profile::with_holes)
                                ? Profile::with_holes
                                : Profile::general;
    std::array<std::vector<Dart>, 2> holes;
    holes[out.left_rep.first].push_back(out.left_rep.second);
    holes[out.right_rep.first].push_back(out.right_rep.second);
    for (Dart rep : m.hole_reps()) {
        auto [p, id] = out.dart_map[rep];
        holes[p].push_back(id);
    }

    out.pieces.push_back(build_and_validate(sig[0], alp[0], out.dart_map[m.root()].second,
                                            holes[0], piece_profile));
    if (ncomp == 2)
        out.pieces.push_back(build_and_validate(sig[1], alp[1], 0, holes[1], piece_profile));

    if (ncomp == 1) {
        out.cls = CycleClass::nonseparating;
    } else {
        bool disk_side = false;
        for (const auto& p : out.pieces)
            if (p.genus() == 0 && p.num_holes() == 1) disk_side = true;
        out.cls = disk_side ? CycleClass::contractible : CycleClass::separating_noncontractible;
    }
    return out;
}

struct TwoCycleCut {
    bool nonseparating = false;
    // Present when nonseparating: same dart ids, genus one lower.
    std::optional<CombinatorialMap> map;
    // The two edges the cut banks collapse to, vertex-disjoint in the result.
    std::array<Dart, 2> left_edge{}, right_edge{};
};

// Cut along a 2-cycle of parallel edges and immediately collapse both digon
// banks, so the result is again an honest quadrangulation on the same darts.
// f1 and r2 are darts of the two edges at a shared vertex. Faces do not move;
// only sigma and alpha change. Inverse of glue_digons.
inline TwoCycleCut cut_two_cycle(const CombinatorialMap& m, Dart f1, Dart r2) {
    if (f1 == r2 || m.alpha(f1) == r2) throw MapError("need two distinct parallel edges");
    if (m.vertex_of(f1) != m.vertex_of(r2) ||
        m.vertex_of(m.alpha(f1)) != m.vertex_of(m.alpha(r2)))
        throw MapError("edges are not parallel");
    Dart r1 = m.alpha(f1), f2 = m.alpha(r2);
    std::vector<Dart> sigma = m.sigma_array(), alpha = m.alpha_array();
    alpha[r2] = r1;
    alpha[r1] = r2;
    alpha[f1] = f2;
    alpha[f2] = f1;
    std::swap(sigma[r2], sigma[f1]);
    std::swap(sigma[r1], sigma[f2]);

    TwoCycleCut out;
    out.left_edge = {r2, r1};
    out.right_edge = {f1, f2};
    const Dart D = m.dart_count();
    std::vector<char> seen(D, 0);
    std::vector<Dart> stack{m.root()};
    seen[m.root()] = 1;
    Dart cnt = 1;
    while (!stack.empty()) {
        Dart d = stack.back();
        stack.pop_back();
        for (Dart e : {sigma[d], alpha[d]}) {
            if (!seen[e]) { seen[e] = 1; ++cnt; stack.push_back(e); }
        }
    }
    out.nonseparating = cnt == D;
    if (out.nonseparating)
        out.map = build_and_validate(std::move(sigma), std::move(alpha), m.root(),
                                     m.hole_reps(), m.profile());
    return out;
}

// Merge two vertex-disjoint edges into a 2-cycle, raising the genus by one.
// Orientation comes from the vertex coloring: white ends pair up. Faces do
// not move. Inverse of cut_two_cycle.
inline CombinatorialMap glue_digons(const CombinatorialMap& m, Dart g, Dart h) {
    if (!m.has_colors()) throw MapError("glue_digons needs a 2-colored map");
    Dart g_u = m.color_of_dart(g) == VColor::white ? g : m.alpha(g);
    Dart h_c = m.color_of_dart(h) == VColor::white ? h : m.alpha(h);
    Dart g_w = m.alpha(g_u), h_d = m.alpha(h_c);
    std::uint32_t vs[4] = {m.vertex_of(g_u), m.vertex_of(g_w), m.vertex_of(h_c),
                           m.vertex_of(h_d)};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (vs[i] == vs[j]) throw MapError("edges must be vertex-disjoint");
    std::vector<Dart> sigma = m.sigma_array(), alpha = m.alpha_array();
    alpha[g_u] = h_d;
    alpha[h_d] = g_u;
    alpha[g_w] = h_c;
    alpha[h_c] = g_w;
    std::swap(sigma[g_u], sigma[h_c]);
    std::swap(sigma[g_w], sigma[h_d]);
    return build_and_validate(std::move(sigma), std::move(alpha), m.root(), m.hole_reps(),
                              m.profile());
}

struct OpenPathResult {
    CombinatorialMap map;
    // The fold mark: first left-bank dart of the slit, which close_path needs
    // to undo the cut. Input dart ids survive unchanged; the 2l copies are
    // appended at the end.
    Dart fold_rep;
};

namespace detail {

inline void check_path(const CombinatorialMap& m, const std::vector<Dart>& path,
                       bool far_end_on_hole, Dart hole_rep) {
    if (path.empty()) throw MapError("empty path");
    std::vector<std::uint32_t> verts{m.vertex_of(path[0])};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (m.vertex_of(m.alpha(path[i])) != m.vertex_of(path[i + 1]))
            throw MapError("path does not chain", path[i]);
        verts.push_back(m.vertex_of(path[i + 1]));
    }
    verts.push_back(m.vertex_of(m.alpha(path.back())));
    auto sorted = verts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw MapError("path is not simple");
    // Path edges must be interior, and every vertex except possibly the far
    // end must stay off hole boundaries.
    std::vector<char> on_hole_vertex(m.num_vertices(), 0);
    for (Dart d = 0; d < m.dart_count(); ++d)
        if (m.is_hole_face(m.face_of(d))) on_hole_vertex[m.vertex_of(d)] = 1;
    for (Dart d : path)
        if (m.is_hole_face(m.face_of(d)) || m.is_hole_face(m.face_of(m.alpha(d))))
            throw MapError("path runs along a hole", d);
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
        if (on_hole_vertex[verts[i]]) throw MapError("path vertex on a hole boundary");
    std::uint32_t far = verts.back();
    if (far_end_on_hole) {
        bool on_target = false;
        Dart c = hole_rep;
        do {
            if (m.vertex_of(c) == far) on_target = true;
            c = m.phi(c);
        } while (c != hole_rep);
        if (!on_target) throw MapError("path must end on the given hole");
    } else if (on_hole_vertex[far]) {
        throw MapError("path endpoint on a hole boundary");
    }
}

// Shared slit construction. Duplicates every path dart; left copies keep the
// original ids. Returns without the far-endpoint treatment, which differs
// between the interior and boundary variants.
inline void slit_common(const CombinatorialMap& m, const std::vector<Dart>& path,
                        std::vector<Dart>& sigma, std::vector<Dart>& alpha) {
    const Dart D = m.dart_count();
    const std::size_t l = path.size();
    sigma.resize(D + 2 * l);
    alpha.resize(D + 2 * l);
    for (Dart d = 0; d < D; ++d) { sigma[d] = m.sigma(d); alpha[d] = m.alpha(d); }
    for (std::size_t i = 0; i < l; ++i) {
        alpha[D + 2 * i] = static_cast<Dart>(D + 2 * i + 1);
        alpha[D + 2 * i + 1] = static_cast<Dart>(D + 2 * i);
    }
    // Near endpoint: the right copy slides in just before the first dart.
    sigma[m.sigma_inv(path[0])] = D;
    sigma[D] = path[0];
    // Interior vertices split at the arriving and leaving darts.
    for (std::size_t i = 1; i < l; ++i) {
        Dart arrive = m.alpha(path[i - 1]);
        Dart leave = path[i];
        Dart r_prev = static_cast<Dart>(D + 2 * (i - 1) + 1);
        Dart f_here = static_cast<Dart>(D + 2 * i);
        Dart first = m.sigma(arrive);
        if (first == leave) {
            sigma[r_prev] = f_here;  // right arc empty
        } else {
            sigma[r_prev] = first;
            sigma[m.sigma_inv(leave)] = f_here;
        }
        sigma[f_here] = r_prev;
        sigma[arrive] = leave;
    }
}

}  // namespace detail

// Slit the surface along a simple path between two interior vertices. The
// slit becomes a marked simple face of degree 2l; genus does not change.
inline OpenPathResult open_path(const CombinatorialMap& m, const std::vector<Dart>& path) {
    detail::check_path(m, path, false, 0);
    std::vector<Dart> sigma, alpha;
    detail::slit_common(m, path, sigma, alpha);
    // Far endpoint keeps one vertex: the right copy slides in after arrival.
    const Dart D = m.dart_count();
    Dart arrive = m.alpha(path.back());
    Dart r_last = static_cast<Dart>(D + 2 * path.size() - 1);
    sigma[r_last] = m.sigma(arrive);
    sigma[arrive] = r_last;

    std::vector<Dart> holes = m.hole_reps();
    holes.push_back(path[0]);
    Profile prof = m.profile() == Profile::quadrangulation ? Profile::with_holes : m.profile();
    return {build_and_validate(std::move(sigma), std::move(alpha), m.root(), holes, prof),
            path[0]};
}

// Slit along a simple path from an interior vertex to a vertex of the given
// hole. The slit merges with that hole into one boundary of size
// (old size) + 2l, re-marked at the fold dart.
inline OpenPathResult open_path_to_boundary(const CombinatorialMap& m,
                                            const std::vector<Dart>& path, Dart hole_rep) {
    if (!m.is_hole_face(m.face_of(hole_rep))) throw MapError("not a hole", hole_rep);
    detail::check_path(m, path, true, hole_rep);
    std::vector<Dart> sigma, alpha;
    detail::slit_common(m, path, sigma, alpha);
    // The far vertex splits at the hole corner and at the arrival: the left
    // bank closes onto the outgoing boundary dart b, the right copy takes
    // over the corner side.
    const Dart D = m.dart_count();
    Dart arrive = m.alpha(path.back());
    std::uint32_t w = m.vertex_of(arrive);
    Dart b = kNoDart;
    {
        Dart c = hole_rep;
        do {
            if (m.vertex_of(c) == w) { b = c; break; }
            c = m.phi(c);
        } while (c != hole_rep);
    }
    Dart r_last = static_cast<Dart>(D + 2 * path.size() - 1);
    Dart before_corner = m.sigma_inv(b);
    // before_corner == arrive would mean the last path edge runs along the
    // hole, which check_path has excluded.
    sigma[r_last] = m.sigma(arrive);
    sigma[before_corner] = r_last;
    sigma[arrive] = b;

    std::vector<Dart> holes;
    for (Dart rep : m.hole_reps())
        if (m.face_of(rep) != m.face_of(hole_rep)) holes.push_back(rep);
    holes.push_back(path[0]);
    return {build_and_validate(std::move(sigma), std::move(alpha), m.root(), holes,
                               m.profile() == Profile::quadrangulation ? Profile::with_holes
                                                                       : m.profile()),
            path[0]};
}

struct FoldResult {
    CombinatorialMap map;
    std::vector<Dart> dart_map;   // old dart -> new dart, kNoDart for deleted darts
    Dart residual_rep = kNoDart;  // combined hole rep after a partial fold
};

namespace detail {

// Quotient by edge identifications given as dead dart -> surviving partner.
// Faces of the result: every face not listed as consumed, plus the supplied
// residual cycles. Sigma is rebuilt from phi and alpha.
inline FoldResult quotient(const CombinatorialMap& m, const std::vector<Dart>& dead,
                           const std::vector<Dart>& partner_of_dead,
                           const std::vector<std::uint32_t>& consumed_faces,
                           const std::vector<std::vector<Dart>>& residual_faces,
                           const std::vector<Dart>& new_hole_reps) {
    const Dart D = m.dart_count();
    std::vector<Dart> rename(D);
    std::vector<char> is_dead(D, 0);
    for (Dart d = 0; d < D; ++d) rename[d] = d;
    for (std::size_t i = 0; i < dead.size(); ++i) {
        if (is_dead[dead[i]]) throw MapError("dart folded twice", dead[i]);
        is_dead[dead[i]] = 1;
        rename[dead[i]] = partner_of_dead[i];
    }
    for (std::size_t i = 0; i < dead.size(); ++i)
        if (is_dead[partner_of_dead[i]]) throw MapError("fold partner also folded", dead[i]);

    std::vector<char> face_consumed(m.num_faces(), 0);
    for (auto f : consumed_faces) face_consumed[f] = 1;

    std::vector<Dart> phi(D, kNoDart);
    for (Dart d = 0; d < D; ++d) {
        if (is_dead[d] || face_consumed[m.face_of(d)]) continue;
        phi[d] = m.phi(d);
    }
    for (const auto& cyc : residual_faces)
        for (std::size_t i = 0; i < cyc.size(); ++i) phi[cyc[i]] = cyc[(i + 1) % cyc.size()];

    std::vector<Dart> new_id(D, kNoDart);
    Dart n = 0;
    for (Dart d = 0; d < D; ++d)
        if (!is_dead[d]) new_id[d] = n++;
    std::vector<Dart> sigma(n), alpha(n);
    for (Dart d = 0; d < D; ++d) {
        if (is_dead[d]) continue;
        Dart a = rename[m.alpha(d)];
        if (phi[a] == kNoDart) throw MapError("fold left a dart without a face", d);
        alpha[new_id[d]] = new_id[a];
        sigma[new_id[d]] = new_id[phi[a]];
    }

    std::vector<Dart> holes;
    for (Dart rep : m.hole_reps())
        if (!face_consumed[m.face_of(rep)]) holes.push_back(new_id[rename[rep]]);
    for (Dart rep : new_hole_reps) holes.push_back(new_id[rename[rep]]);

    Profile prof = m.profile();
    if (prof == Profile::with_holes && holes.empty()) prof = Profile::quadrangulation;

    FoldResult out{build_and_validate(std::move(sigma), std::move(alpha),
                                      new_id[rename[m.root()]], holes, prof),
                   {}, kNoDart};
    out.dart_map.assign(D, kNoDart);
    for (Dart d = 0; d < D; ++d)
        if (!is_dead[d]) out.dart_map[d] = new_id[d];
    return out;
}

}  // namespace detail

// Fold the first `steps` boundary edges of a hole onto its last `steps`,
// sewing a previously opened slit shut. With 2*steps equal to the hole size
// the hole disappears; otherwise the leftover arc remains a hole, re-marked
// at the dart right after the fold.
inline FoldResult close_path(const CombinatorialMap& m, Dart rep, std::size_t steps) {
    if (!m.is_hole_face(m.face_of(rep))) throw MapError("not a hole", rep);
    std::vector<Dart> t = m.face_cycle(rep);
    const std::size_t S = t.size();
    if (steps == 0 || 2 * steps > S) throw MapError("bad fold length");
    std::vector<char> will_die(m.dart_count(), 0);
    for (std::size_t i = 1; i <= steps; ++i) {
        will_die[t[i - 1]] = 1;
        will_die[t[S - i]] = 1;
    }
    std::vector<Dart> dead, partner;
    for (std::size_t i = 1; i <= steps; ++i) {
        Dart a = t[i - 1], b = t[S - i];
        if (a == b || m.alpha(a) == b) throw MapError("cannot fold a dart onto itself", a);
        if (will_die[m.alpha(a)] || will_die[m.alpha(b)])
            throw MapError("fold partner lies on the folded arc", a);
        dead.push_back(a);
        partner.push_back(m.alpha(b));
        dead.push_back(b);
        partner.push_back(m.alpha(a));
    }
    std::vector<std::vector<Dart>> residual;
    std::vector<Dart> new_reps;
    if (2 * steps < S) {
        residual.push_back({t.begin() + steps, t.begin() + (S - steps)});
        new_reps.push_back(t[steps]);
    }
    auto out = detail::quotient(m, dead, partner, {m.face_of(rep)}, residual, new_reps);
    if (2 * steps < S) out.residual_rep = out.dart_map[t[steps]];
    return out;
}

// Sew two equal-size holes of one map together, orientation-reversingly, so
// that the edge of anchor a merges with the edge of alpha(b). Genus rises.
inline FoldResult glue_boundaries(const CombinatorialMap& m, Dart a, Dart b) {
    if (!m.is_hole_face(m.face_of(a)) || !m.is_hole_face(m.face_of(b)))
        throw MapError("anchors must lie on holes");
    if (m.face_of(a) == m.face_of(b)) throw MapError("anchors on the same hole");
    std::vector<Dart> ta = m.face_cycle(a), tb = m.face_cycle(b);
    if (ta.size() != tb.size()) throw MapError("holes differ in size");
    const std::size_t s = ta.size();
    std::vector<char> will_die(m.dart_count(), 0);
    for (Dart d : ta) will_die[d] = 1;
    for (Dart d : tb) will_die[d] = 1;
    std::vector<Dart> dead, partner;
    for (std::size_t k = 0; k < s; ++k) {
        Dart ak = ta[k], bk = tb[(s - k) % s];
        if (will_die[m.alpha(ak)] || will_die[m.alpha(bk)])
            throw MapError("an edge joins the two boundaries", ak);
        dead.push_back(ak);
        partner.push_back(m.alpha(bk));
        dead.push_back(bk);
        partner.push_back(m.alpha(ak));
    }
    return detail::quotient(m, dead, partner, {m.face_of(a), m.face_of(b)}, {}, {});
}

// Disjoint-union variant: glue a hole of ma to a hole of mb into one map.
// Darts of mb are shifted past ma's; ma's root survives as the root. In the
// dart_map, mb's dart d appears at index (ma dart count) + d.
inline FoldResult glue_boundaries(const CombinatorialMap& ma, Dart a,
                                  const CombinatorialMap& mb, Dart b) {
    if (!ma.is_hole_face(ma.face_of(a)) || !mb.is_hole_face(mb.face_of(b)))
        throw MapError("anchors must lie on holes");
    std::vector<Dart> ta = ma.face_cycle(a), tb = mb.face_cycle(b);
    if (ta.size() != tb.size()) throw MapError("holes differ in size");
    const std::size_t s = ta.size();
    const Dart Da = ma.dart_count(), Db = mb.dart_count(), T = Da + Db;
    std::vector<Dart> alpha(T);
    for (Dart d = 0; d < Da; ++d) alpha[d] = ma.alpha(d);
    for (Dart d = 0; d < Db; ++d) alpha[Da + d] = Da + mb.alpha(d);

    std::vector<Dart> rename(T);
    std::vector<char> is_dead(T, 0);
    for (Dart d = 0; d < T; ++d) rename[d] = d;
    for (std::size_t k = 0; k < s; ++k) {
        is_dead[ta[k]] = 1;
        is_dead[Da + tb[k]] = 1;
    }
    for (std::size_t k = 0; k < s; ++k) {
        Dart ak = ta[k], bk = Da + tb[(s - k) % s];
        if (is_dead[alpha[ak]] || is_dead[alpha[bk]])
            throw MapError("an edge joins the two boundaries", ak);
        rename[ak] = alpha[bk];
        rename[bk] = alpha[ak];
    }
    std::vector<Dart> phi(T, kNoDart);
    for (Dart d = 0; d < Da; ++d)
        if (!is_dead[d] && ma.face_of(d) != ma.face_of(a)) phi[d] = ma.phi(d);
    for (Dart d = 0; d < Db; ++d)
        if (!is_dead[Da + d] && mb.face_of(d) != mb.face_of(b)) phi[Da + d] = Da + mb.phi(d);
    std::vector<Dart> new_id(T, kNoDart);
    Dart n = 0;
    for (Dart d = 0; d < T; ++d)
        if (!is_dead[d]) new_id[d] = n++;
    std::vector<Dart> nsig(n), nalp(n);
    for (Dart d = 0; d < T; ++d) {
        if (is_dead[d]) continue;
        Dart pa = rename[alpha[d]];
        if (phi[pa] == kNoDart) throw MapError("fold left a dart without a face", d);
        nalp[new_id[d]] = new_id[pa];
        nsig[new_id[d]] = new_id[phi[pa]];
    }
    std::vector<Dart> holes;
    for (Dart rep : ma.hole_reps())
        if (ma.face_of(rep) != ma.face_of(a)) holes.push_back(new_id[rename[rep]]);
    for (Dart rep : mb.hole_reps())
        if (mb.face_of(rep) != mb.face_of(b)) holes.push_back(new_id[rename[Da + rep]]);
    Profile prof = ma.profile();
    if (prof == Profile::with_holes && holes.empty()) prof = Profile::quadrangulation;
    FoldResult out{build_and_validate(std::move(nsig), std::move(nalp),
                                      new_id[rename[ma.root()]], holes, prof),
                   {}, kNoDart};
    out.dart_map.assign(T, kNoDart);
    for (Dart d = 0; d < T; ++d)
        if (!is_dead[d]) out.dart_map[d] = new_id[d];
    return out;
}

// Add a diagonal between the corners before d1 and before d2 of one face,
// splitting it in two. New darts x = D (at d1's vertex) and y = D+1. The
// result is built under the general profile since face degrees change.
inline CombinatorialMap add_diagonal(const CombinatorialMap& m, Dart d1, Dart d2) {
    if (m.face_of(d1) != m.face_of(d2) || d1 == d2)
        throw MapError("diagonal needs two corners of one face");
    if (m.vertex_of(d1) == m.vertex_of(d2)) throw MapError("diagonal would be a loop");
    const Dart D = m.dart_count();
    std::vector<Dart> sigma(D + 2), alpha(D + 2);
    for (Dart d = 0; d < D; ++d) { sigma[d] = m.sigma(d); alpha[d] = m.alpha(d); }
    alpha[D] = D + 1;
    alpha[D + 1] = D;
    sigma[m.sigma_inv(d1)] = D;
    sigma[D] = d1;
    sigma[m.sigma_inv(d2)] = D + 1;
    sigma[D + 1] = d2;
    return build_and_validate(std::move(sigma), std::move(alpha), m.root(), m.hole_reps(),
                              Profile::general);
}

struct TessellationResult {
    CombinatorialMap map;
    std::vector<Dart> dart_map;  // old dart -> new dart (identity unless p = 1)
    std::vector<Dart> added;     // chord darts in creation order (p >= 3)
    Dart anchor = kNoDart;       // apex dart (p >= 2) or the merged edge dart (p = 1)
};

// Fill a 2p-gon hole with p-1 quadrangles. A digon hole contracts to a single
// edge; larger holes are fanned from the apex at the representative dart with
// chords to every second boundary vertex. The result is a quadrangulation
// again (or keeps its other holes).
inline TessellationResult tessellate_boundary(const CombinatorialMap& m, Dart rep) {
    if (!m.is_hole_face(m.face_of(rep))) throw MapError("not a hole", rep);
    std::vector<Dart> t = m.face_cycle(rep);
    if (t.size() % 2 != 0) throw MapError("odd boundary");
    const std::size_t p = t.size() / 2;
    const Dart D = m.dart_count();

    std::vector<Dart> keep_holes;
    for (Dart r : m.hole_reps())
        if (m.face_of(r) != m.face_of(rep)) keep_holes.push_back(r);
    auto final_profile = [&](bool holes_left) {
        if (m.profile() == Profile::general) return Profile::general;
        return holes_left ? Profile::with_holes : Profile::quadrangulation;
    };

    if (p == 1) {
        Dart x = t[0], y = t[1];
        if (m.alpha(x) == y) throw MapError("digon made of a single edge", x);
        if (m.vertex_of(x) == m.vertex_of(y)) throw MapError("non-simple digon", x);
        Dart ax = m.alpha(x), ay = m.alpha(y);
        std::vector<Dart> sigma = m.sigma_array(), alpha = m.alpha_array();
        // The digon corners are sigma(ay) = x and sigma(ax) = y; splice both
        // banks out and merge the partner darts into one edge.
        alpha[ax] = ay;
        alpha[ay] = ax;
        sigma[ay] = m.sigma(x);
        sigma[ax] = m.sigma(y);
        std::vector<Dart> new_id(D, kNoDart);
        Dart n = 0;
        for (Dart d = 0; d < D; ++d)
            if (d != x && d != y) new_id[d] = n++;
        std::vector<Dart> nsig(n), nalp(n);
        for (Dart d = 0; d < D; ++d) {
            if (new_id[d] == kNoDart) continue;
            nsig[new_id[d]] = new_id[sigma[d]];
            nalp[new_id[d]] = new_id[alpha[d]];
        }
        std::vector<Dart> holes;
        for (Dart r : keep_holes) holes.push_back(new_id[r]);
        // If the root sat on the digon it moves to the merged edge.
        Dart root = m.root() == x ? ay : (m.root() == y ? ax : m.root());
        TessellationResult out{build_and_validate(std::move(nsig), std::move(nalp),
                                                  new_id[root], holes,
                                                  final_profile(!holes.empty())),
                               std::move(new_id), {}, kNoDart};
        out.anchor = out.dart_map[ax];
        return out;
    }

    // Fan on raw arrays; validate once at the end (intermediate states have a
    // shrinking non-quadrangular face).
    std::vector<Dart> sigma = m.sigma_array(), alpha = m.alpha_array();
    TessellationResult out;
    out.dart_map.resize(D);
    for (Dart d = 0; d < D; ++d) out.dart_map[d] = d;
    out.anchor = t[0];
    Dart apex_dart = t[0];
    auto sigma_inv_scan = [&](Dart d) {
        for (Dart e = 0; e < static_cast<Dart>(sigma.size()); ++e)
            if (sigma[e] == d) return e;
        throw MapError("rotation scan failed", d);
    };
    for (std::size_t k = 0; k + 2 < p; ++k) {
        Dart d2 = t[2 * k + 3];
        Dart x = static_cast<Dart>(sigma.size());
        Dart y = x + 1;
        sigma.resize(x + 2);
        alpha.resize(x + 2);
        alpha[x] = y;
        alpha[y] = x;
        sigma[sigma_inv_scan(apex_dart)] = x;
        sigma[x] = apex_dart;
        sigma[sigma_inv_scan(d2)] = y;
        sigma[y] = d2;
        out.added.push_back(x);
        out.added.push_back(y);
        apex_dart = x;
    }
    out.map = build_and_validate(std::move(sigma), std::move(alpha), m.root(), keep_holes,
                                 final_profile(!keep_holes.empty()));
    return out;
}

struct CycleWithTailCut {
    CycleClass cls;
    std::vector<CombinatorialMap> pieces;  // piece 0 holds the root
    std::size_t path_len = 0;
    std::pair<int, Dart> fold_rep{-1, kNoDart};  // mark for close_path (path cut only)
    std::pair<int, Dart> left_rep, right_rep;    // anchors for glue_boundaries
    std::uint32_t combined_boundary = 0;         // size of the slit+cycle hole
};

// Cut along a simple cycle, then slit a simple path from the root vertex to
// the cut boundary (the path is empty when the cycle passes through the root
// vertex). The piece holding the path ends with one boundary of size
// |cycle| + 2|path|; undo with close_path then glue_boundaries.
inline CycleWithTailCut cut_cycle_with_tail(const CombinatorialMap& m,
                                            const std::vector<Dart>& cycle,
                                            const std::vector<Dart>& path) {
    for (Dart d : path)
        for (Dart c : cycle)
            if (m.vertex_of(d) == m.vertex_of(c))
                throw MapError("path may touch the cycle only at its far end", d);
    if (path.empty()) {
        bool through_root = false;
        for (Dart c : cycle)
            if (m.vertex_of(c) == m.vertex_of(m.root())) through_root = true;
        if (!through_root) throw MapError("empty path needs the cycle at the root vertex");
    } else if (m.vertex_of(path[0]) != m.vertex_of(m.root())) {
        throw MapError("path must start at the root vertex");
    }

    CutPieces cut = cut_simple_cycle(m, cycle);
    CycleWithTailCut out;
    out.cls = cut.cls;
    out.path_len = path.size();
    out.left_rep = cut.left_rep;
    out.right_rep = cut.right_rep;
    out.pieces = std::move(cut.pieces);
    if (path.empty()) {
        out.combined_boundary = static_cast<std::uint32_t>(cycle.size());
        return out;
    }

    int pc = cut.dart_map[path[0]].first;
    std::vector<Dart> path_in(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (cut.dart_map[path[i]].first != pc) throw MapError("path crosses the cut");
        path_in[i] = cut.dart_map[path[i]].second;
    }
    const CombinatorialMap& piece = out.pieces[pc];
    // The far vertex was split by the cycle cut; the arrival dart decides
    // which bank the path attaches to.
    Dart arrive = cut.dart_map[m.alpha(path.back())].second;
    Dart attach_rep = kNoDart;
    for (const auto& r : {cut.left_rep, cut.right_rep}) {
        if (r.first != pc) continue;
        Dart it = r.second;
        do {
            if (piece.vertex_of(it) == piece.vertex_of(arrive)) attach_rep = r.second;
            it = piece.phi(it);
        } while (it != r.second);
    }
    if (attach_rep == kNoDart) throw MapError("path does not reach the cut boundary");

    auto opened = open_path_to_boundary(piece, path_in, attach_rep);
    out.combined_boundary = static_cast<std::uint32_t>(cycle.size() + 2 * path.size());
    out.fold_rep = {pc, opened.fold_rep};
    out.pieces[pc] = std::move(opened.map);
    // Anchor ids survive: open_path_to_boundary appends darts without renaming.
    return out;
}

}  // namespace genuslab

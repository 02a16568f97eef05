#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "genuslab/map.hpp"
#include "genuslab/unicellular.hpp"

namespace genuslab {

struct PointedQuadrangulation {
    CombinatorialMap map;
    std::uint32_t pointed_vertex = 0;
};

// Side convention for the output root edge; forward and backward agree on it.
enum class RootSign : signed char { plus = 1, minus = -1 };

namespace detail {

inline std::vector<std::uint32_t> vertex_distances(const CombinatorialMap& m,
                                                   std::uint32_t src) {
    std::vector<std::vector<Dart>> at(m.num_vertices());
    for (Dart d = 0; d < m.dart_count(); ++d) at[m.vertex_of(d)].push_back(d);
    std::vector<std::uint32_t> dist(m.num_vertices(), ~0u);
    dist[src] = 0;
    std::vector<std::uint32_t> queue{src};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        for (Dart d : at[v]) {
            std::uint32_t u = m.vertex_of(m.alpha(d));
            if (dist[u] == ~0u) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

}  // namespace detail

// Corner k of the face tour is the wedge just before tour dart k at its
// vertex. Every corner sends one chord forward to the next corner labeled one
// less, or to the added vertex v0 when its label is 1. Chord darts are 2k
// (outgoing) and 2k+1 (incoming); the original edges are dropped. Around a
// vertex the chords of one wedge read nearest source first, outgoing last,
// which is the nesting order the chords have when drawn inside the face.
inline PointedQuadrangulation cms_forward(const LabeledUnicellular& lu, RootSign eps) {
    check_well_labeled(lu);
    const CombinatorialMap& m = lu.map;
    const Dart D = m.dart_count();
    if (D == 0) throw std::invalid_argument("cms_forward needs at least one edge");

    std::vector<Dart> tour(D);
    std::vector<std::uint32_t> pos(D);
    {
        Dart c = m.root();
        for (Dart k = 0; k < D; ++k) {
            tour[k] = c;
            pos[c] = k;
            c = m.phi(c);
        }
    }
    auto corner_label = [&](Dart k) { return lu.labels[m.vertex_of(tour[k])]; };

    constexpr std::uint32_t kPointed = ~0u;
    std::vector<std::uint32_t> succ(D, kPointed);
    for (Dart k = 0; k < D; ++k) {
        if (corner_label(k) == 1) continue;
        for (Dart step = 1; step <= D; ++step) {
            Dart j = (k + step) % D;
            if (corner_label(j) == corner_label(k) - 1) {
                succ[k] = j;
                break;
            }
        }
        if (succ[k] == kPointed) throw std::logic_error("well-labeled map lacks a successor");
    }

    // arrivals per corner, nearest source first
    std::vector<std::vector<Dart>> arrivals(D);
    for (Dart k = 0; k < D; ++k)
        if (succ[k] != kPointed) arrivals[succ[k]].push_back(k);
    for (Dart k = 0; k < D; ++k)
        std::sort(arrivals[k].begin(), arrivals[k].end(), [&](Dart a, Dart b) {
            return (k + D - a) % D < (k + D - b) % D;
        });

    const Dart DQ = 2 * D;
    std::vector<Dart> sigma(DQ, kNoDart), alpha(DQ);
    for (Dart k = 0; k < D; ++k) {
        alpha[2 * k] = 2 * k + 1;
        alpha[2 * k + 1] = 2 * k;
    }
    auto close_cycle = [&](const std::vector<Dart>& rot) {
        for (std::size_t i = 0; i < rot.size(); ++i)
            sigma[rot[i]] = rot[(i + 1) % rot.size()];
    };

    std::vector<char> seen_vertex(m.num_vertices(), 0);
    for (Dart d = 0; d < D; ++d) {
        std::uint32_t v = m.vertex_of(d);
        if (seen_vertex[v]) continue;
        seen_vertex[v] = 1;
        std::vector<Dart> rot;
        for (Dart e : m.darts_of_vertex(d)) {
            Dart k = pos[e];
            for (Dart j : arrivals[k]) rot.push_back(2 * j + 1);
            rot.push_back(2 * k);
        }
        close_cycle(rot);
    }
    {
        std::vector<Dart> rot;
        for (Dart k = D; k-- > 0;)
            if (corner_label(k) == 1) rot.push_back(2 * k + 1);
        if (rot.empty()) throw std::logic_error("no corner labeled 1");
        close_cycle(rot);
    }

    Dart root = eps == RootSign::plus ? 0 : 1;
    auto q = build_and_validate(std::move(sigma), std::move(alpha), root, {},
                                Profile::quadrangulation);
    if (q.genus() != m.genus()) throw std::logic_error("correspondence changed the genus");

    // locate v0 in the rebuilt map through any of its incoming chords
    std::uint32_t v0 = 0;
    for (Dart k = 0; k < D; ++k)
        if (corner_label(k) == 1) {
            v0 = q.vertex_of(2 * k + 1);
            break;
        }
    return {std::move(q), v0};
}

struct CmsBackwardResult {
    LabeledUnicellular labeled;
    RootSign eps = RootSign::plus;
};

// Distances to v0 label the corners; every face shows either two opposite
// labels equal (confluent) or one maximum (simple). The new edge joins the
// two high corners of a confluent face, or the maximum to the face corner
// just before it; dropping the quadrangulation's own edges and v0 leaves the
// one-face labeled map. Wedge bookkeeping mirrors cms_forward: a face's new
// endpoint at the wedge of dart d slots in just before d, and the root comes
// back as the first new dart strictly after the root chord's high side.
inline CmsBackwardResult cms_backward(const CombinatorialMap& q, std::uint32_t v0) {
    if (q.num_vertices() <= v0) throw std::invalid_argument("pointed vertex out of range");
    const Dart DQ = q.dart_count();
    if (DQ == 0) throw std::invalid_argument("cms_backward needs at least one face");
    auto dist = detail::vertex_distances(q, v0);
    for (std::uint32_t d : dist)
        if (d == ~0u) throw std::invalid_argument("quadrangulation not connected");

    const Dart DU = DQ / 2;  // one new edge per face, two darts each
    std::vector<Dart> host(DQ, kNoDart);     // new dart living in the wedge before q-dart
    std::vector<std::uint32_t> endpoint(DU); // q-vertex carrying each new dart

    std::vector<char> seen(DQ, 0);
    Dart face_id = 0;
    for (Dart d0 = 0; d0 < DQ; ++d0) {
        if (seen[d0]) continue;
        std::vector<Dart> face;
        Dart c = d0;
        do {
            seen[c] = 1;
            face.push_back(c);
            c = q.phi(c);
        } while (c != d0);
        if (face.size() != 4) throw std::invalid_argument("face of degree != 4");
        std::array<std::uint32_t, 4> lab;
        for (int i = 0; i < 4; ++i) lab[i] = dist[q.vertex_of(face[i])];
        int hi = 0;
        for (int i = 1; i < 4; ++i)
            if (lab[i] > lab[hi]) hi = i;
        Dart ea, eb;
        if (lab[(hi + 2) % 4] == lab[hi]) {
            // confluent: the two opposite high corners
            ea = face[hi];
            eb = face[(hi + 2) % 4];
        } else {
            // simple: maximum corner and the face corner just before it
            ea = face[hi];
            eb = face[(hi + 3) % 4];
        }
        host[ea] = 2 * face_id;
        host[eb] = 2 * face_id + 1;
        endpoint[2 * face_id] = q.vertex_of(ea);
        endpoint[2 * face_id + 1] = q.vertex_of(eb);
        ++face_id;
    }

    // next new dart strictly after q-dart d around its vertex
    auto next_host = [&](Dart d) {
        Dart c = q.sigma(d);
        for (Dart guard = 0; guard <= DQ; ++guard) {
            if (host[c] != kNoDart) return host[c];
            c = q.sigma(c);
        }
        throw std::logic_error("vertex lost all corners");
    };

    std::vector<Dart> sigma(DU), alpha(DU);
    for (Dart f = 0; f + 1 < DU; f += 2) {
        alpha[f] = f + 1;
        alpha[f + 1] = f;
    }
    for (Dart d = 0; d < DQ; ++d)
        if (host[d] != kNoDart) sigma[host[d]] = next_host(d);

    Dart r = q.root();
    Dart r_high = dist[q.vertex_of(r)] > dist[q.vertex_of(q.alpha(r))] ? r : q.alpha(r);
    RootSign eps = r_high == r ? RootSign::plus : RootSign::minus;
    Dart u_root = next_host(r_high);

    auto u = build_and_validate(std::move(sigma), std::move(alpha), u_root, {},
                                Profile::unicellular);
    if (u.genus() != q.genus()) throw std::logic_error("correspondence changed the genus");

    std::vector<int> labels(u.num_vertices(), 0);
    for (Dart d = 0; d < DU; ++d) labels[u.vertex_of(d)] = static_cast<int>(dist[endpoint[d]]);
    LabeledUnicellular lu{std::move(u), std::move(labels)};
    check_well_labeled(lu);
    return {std::move(lu), eps};
}

}  // namespace genuslab

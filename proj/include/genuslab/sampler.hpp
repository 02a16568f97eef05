#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "genuslab/cms.hpp"
#include "genuslab/map.hpp"
#include "genuslab/oracle.hpp"
#include "genuslab/rng.hpp"
#include "genuslab/surgery.hpp"
#include "genuslab/unicellular.hpp"

namespace genuslab {

enum class SampleMethod { exact, exhaustive, mcmc };

inline const char* to_string(SampleMethod m) {
    switch (m) {
        case SampleMethod::exact: return "exact";
        case SampleMethod::exhaustive: return "exhaustive";
        case SampleMethod::mcmc: return "mcmc";
    }
    return "?";
}

inline SampleMethod parse_method(std::string_view s) {
    if (s == "exact") return SampleMethod::exact;
    if (s == "exhaustive") return SampleMethod::exhaustive;
    if (s == "mcmc") return SampleMethod::mcmc;
    throw std::invalid_argument("unknown sampling method: " + std::string(s));
}

struct SamplerSpec {
    int n = 1;
    int g = 0;
    SampleMethod method = SampleMethod::exact;
    std::uint64_t seed = 0;
    std::uint64_t attempt_budget = 10'000'000;  // labeling attempts in sample_exact
    std::uint64_t mcmc_steps = 10'000;

    void validate() const {
        if (n < 1) throw std::invalid_argument("need n >= 1");
        if (g < 0) throw std::invalid_argument("need g >= 0");
        if (n + 2 - 2 * g < 2) throw std::invalid_argument("need n >= 2g");
    }
};

namespace detail {

// One attempt at a uniform labeling: free {-1,0,+1} increments on a BFS
// spanning tree, a validity check on the 2g leftover edges, then the shift
// that puts the minimum at 1. The caller must restart the whole pipeline on
// failure; retrying labels on a kept map would skew mass toward maps with
// few labelings.
inline std::optional<std::vector<int>> try_labeling(const CombinatorialMap& u, Rng& rng) {
    const std::uint32_t V = u.num_vertices();
    std::vector<std::vector<Dart>> at(V);
    for (Dart d = 0; d < u.dart_count(); ++d) at[u.vertex_of(d)].push_back(d);
    std::vector<int> label(V, 0);
    std::vector<char> in_tree_edge(u.dart_count(), 0);
    std::vector<char> seen(V, 0);
    std::vector<std::uint32_t> queue{u.vertex_of(u.root())};
    seen[queue[0]] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t v = queue[head];
        for (Dart d : at[v]) {
            std::uint32_t w = u.vertex_of(u.alpha(d));
            if (seen[w]) continue;
            seen[w] = 1;
            in_tree_edge[d] = in_tree_edge[u.alpha(d)] = 1;
            label[w] = label[v] + static_cast<int>(rng.below(3)) - 1;
            queue.push_back(w);
        }
    }
    for (Dart d = 0; d < u.dart_count(); ++d) {
        if (d > u.alpha(d) || in_tree_edge[d]) continue;
        int diff = label[u.vertex_of(d)] - label[u.vertex_of(u.alpha(d))];
        if (diff > 1 || diff < -1) return std::nullopt;
    }
    int lo = *std::min_element(label.begin(), label.end());
    for (int& l : label) l += 1 - lo;
    return label;
}

}  // namespace detail

// Uniform over rooted bipartite quadrangulations with n faces and genus g.
// Rejection pipeline: decorated tree, vertex merge, labeling attempt, then
// the distance correspondence with a fair root sign; the point is forgotten,
// which is harmless because every map here has the same vertex count.
inline CombinatorialMap sample_exact(const SamplerSpec& spec, Rng& rng) {
    spec.validate();
    const auto cycles = static_cast<std::uint32_t>(spec.n + 1 - 2 * spec.g);
    for (std::uint64_t attempt = 0; attempt < spec.attempt_budget; ++attempt) {
        auto tree = sample_plane_tree(static_cast<std::size_t>(spec.n), rng);
        auto decor = sample_c_permutation(static_cast<std::uint32_t>(spec.n) + 1, cycles, rng);
        auto u = assemble_unicellular(tree, decor);
        auto labels = detail::try_labeling(u, rng);
        if (!labels) continue;
        RootSign eps = rng.coin() ? RootSign::plus : RootSign::minus;
        auto pq = cms_forward({std::move(u), std::move(*labels)}, eps);
        return std::move(pq.map);
    }
    std::ostringstream msg;
    msg << "sample_exact(n=" << spec.n << ", g=" << spec.g << "): no labeling accepted in "
        << spec.attempt_budget << " attempts; measured acceptance < "
        << 1.0 / static_cast<double>(spec.attempt_budget ? spec.attempt_budget : 1)
        << ", so this (n, g) needs a larger attempt_budget";
    throw std::runtime_error(msg.str());
}

// Ground-truth backend: uniform pick from the exhaustive census.
inline CombinatorialMap sample_exhaustive(const SamplerSpec& spec, Rng& rng) {
    spec.validate();
    if (spec.n > 4)
        throw std::invalid_argument("exhaustive backend stops at n = 4");
    static thread_local std::map<std::pair<int, int>, std::vector<CombinatorialMap>> cache;
    auto& list = cache.try_emplace({spec.n, spec.g}).first->second;
    if (list.empty()) list = enumerate_quadrangulations(spec.n, spec.g);
    if (list.empty()) throw std::logic_error("census is empty for a valid (n, g)");
    return list[rng.below(list.size())];
}

namespace detail {

struct CutSite {
    Dart f1 = kNoDart, r2 = kNoDart;
};

// Unordered pairs of parallel edges whose 2-cycle cut keeps the map
// connected. Both darts leave the shared endpoint with the smaller vertex id.
inline std::vector<CutSite> nonseparating_two_cycles(const CombinatorialMap& m) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Dart>> groups;
    for (Dart d = 0; d < m.dart_count(); ++d) {
        if (d > m.alpha(d)) continue;
        std::uint32_t u = m.vertex_of(d), w = m.vertex_of(m.alpha(d));
        if (u <= w)
            groups[{u, w}].push_back(d);
        else
            groups[{w, u}].push_back(m.alpha(d));
    }
    std::vector<CutSite> out;
    for (const auto& [key, darts] : groups)
        for (std::size_t i = 0; i < darts.size(); ++i)
            for (std::size_t j = i + 1; j < darts.size(); ++j)
                if (cut_two_cycle(m, darts[i], darts[j]).nonseparating)
                    out.push_back({darts[i], darts[j]});
    return out;
}

// Unordered pairs of edges with four distinct endpoints, listed in the same
// order disjoint_edge_pairs counts them.
inline std::vector<std::pair<Dart, Dart>> disjoint_edge_pair_list(const CombinatorialMap& m) {
    std::vector<Dart> edges;
    for (Dart d = 0; d < m.dart_count(); ++d)
        if (d < m.alpha(d)) edges.push_back(d);
    std::vector<std::pair<Dart, Dart>> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            Dart e = edges[i], f = edges[j];
            std::uint32_t vs[4] = {m.vertex_of(e), m.vertex_of(m.alpha(e)), m.vertex_of(f),
                                   m.vertex_of(m.alpha(f))};
            bool distinct = true;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (vs[a] == vs[b]) distinct = false;
            if (distinct) out.emplace_back(e, f);
        }
    return out;
}

}  // namespace detail

struct McmcStats {
    std::uint64_t steps = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t holds = 0;  // steps where no nonseparating 2-cycle existed
};

// Metropolis chain over quadrangulations with fixed (n, g). A step cuts a
// uniformly chosen nonseparating 2-cycle (genus drops by one) and reglues two
// uniformly chosen vertex-disjoint edges (genus returns). Cut and glue are
// mutual inverses through the same intermediate map, so the edge-pair factors
// cancel from the proposal ratio and acceptance is min(1, old/new) over the
// two integer nonseparating 2-cycle counts.
//
// The moves do not always connect the whole census: exhaustive checks show
// the (3,1) proposal graph splits 10+10 and the (4,1) graph 167+70+70, while
// (2,1) and (4,2) are connected. A single trajectory therefore explores only
// the component of its start. The uniform distribution stays stationary under
// the kernel regardless, so chains started from sample_exact still emit
// uniform samples; treat within-run frequencies as component-level evidence
// only.
class McmcChain {
public:
    McmcChain(const SamplerSpec& spec, Rng& rng) : state_(sample_exact(spec, rng)) {}

    const CombinatorialMap& state() const { return state_; }
    const McmcStats& stats() const { return stats_; }

    void step(Rng& rng) {
        ++stats_.steps;
        if (!cuts_) cuts_ = detail::nonseparating_two_cycles(state_);
        if (cuts_->empty()) {
            ++stats_.holds;
            return;
        }
        const std::uint64_t n2_old = cuts_->size();
        auto site = (*cuts_)[rng.below(n2_old)];
        auto cut = cut_two_cycle(state_, site.f1, site.r2);
        auto pairs = detail::disjoint_edge_pair_list(*cut.map);
        auto [e, f] = pairs[rng.below(pairs.size())];
        auto next = glue_digons(*cut.map, e, f);
        auto next_cuts = detail::nonseparating_two_cycles(next);
        const std::uint64_t n2_new = next_cuts.size();
        if (n2_new > n2_old && rng.below(n2_new) >= n2_old) {
            ++stats_.rejected;
            return;
        }
        state_ = std::move(next);
        cuts_ = std::move(next_cuts);
        ++stats_.accepted;
    }

private:
    CombinatorialMap state_;
    std::optional<std::vector<detail::CutSite>> cuts_;  // cache for the current state
    McmcStats stats_;
};

inline CombinatorialMap sample_mcmc(const SamplerSpec& spec, Rng& rng,
                                    McmcStats* stats = nullptr) {
    spec.validate();
    McmcChain chain(spec, rng);
    for (std::uint64_t i = 0; i < spec.mcmc_steps; ++i) chain.step(rng);
    if (stats) *stats = chain.stats();
    return chain.state();
}

inline CombinatorialMap sample(const SamplerSpec& spec, Rng& rng) {
    switch (spec.method) {
        case SampleMethod::exact: return sample_exact(spec, rng);
        case SampleMethod::exhaustive: return sample_exhaustive(spec, rng);
        case SampleMethod::mcmc: return sample_mcmc(spec, rng);
    }
    throw std::logic_error("unknown sampling method");
}

}  // namespace genuslab

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "genuslab/counting.hpp"
#include "genuslab/geometry.hpp"
#include "genuslab/map.hpp"
#include "genuslab/rng.hpp"
#include "genuslab/sampler.hpp"

namespace genuslab {

inline constexpr const char* kArtifactName = "genuslab";
inline constexpr const char* kArtifactVersion = "0.1.0";

// Column set shared by `analyze` and campaign CSV output. Switched-off metrics
// leave their fields empty; infinite quantities print as "inf"; flags is a
// semicolon-joined list in a fixed order so rows stay byte-comparable.
inline constexpr const char* kCsvHeader =
    "map_index,n,g,pr,ball_planar_radius,systole,x_nonsep_2cycles,ct_lower,ct_upper,diameter,"
    "flags";

struct MetricSet {
    bool pr = true;  // planarity radius and ball-planarity radius
    bool systole = true;
    bool two_cycles = true;
    bool ct = true;  // cycle-with-tail bounds
    bool diameter = true;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        if (pr) out.push_back("pr");
        if (systole) out.push_back("systole");
        if (two_cycles) out.push_back("two-cycles");
        if (ct) out.push_back("ct");
        if (diameter) out.push_back("diameter");
        return out;
    }

    static MetricSet from_names(const std::vector<std::string>& tokens) {
        if (tokens.empty()) throw std::invalid_argument("metrics list is empty");
        MetricSet m{false, false, false, false, false};
        for (const std::string& t : tokens) {
            if (t == "pr") m.pr = true;
            else if (t == "systole") m.systole = true;
            else if (t == "two-cycles") m.two_cycles = true;
            else if (t == "ct") m.ct = true;
            else if (t == "diameter") m.diameter = true;
            else throw std::invalid_argument("unknown metric: " + t);
        }
        return m;
    }
};

// One analyzed map: the finished CSV row plus the numeric pieces the summary
// statistics need (kept separately so nothing is parsed back out of the CSV).
struct MetricRow {
    std::string csv;
    std::optional<std::uint32_t> x;       // nonseparating 2-cycle count
    std::optional<double> pr_over_log_n;  // finite PR only, n >= 2
    std::optional<double> ct_over_log_n;  // exact ct only, n >= 2
};

inline MetricRow metric_row(const CombinatorialMap& m, std::size_t map_index, int n, int g,
                            const MetricSet& metrics, std::uint32_t ct_cap,
                            std::uint32_t diam_threshold, bool mixing_caveat) {
    MetricRow out;
    std::string row = std::to_string(map_index);
    auto add = [&row](const std::string& field) {
        row += ',';
        row += field;
    };
    auto num = [](std::uint32_t v) { return std::to_string(v); };
    add(std::to_string(n));
    add(std::to_string(g));
    std::vector<const char*> flags;
    if (metrics.pr) {
        auto pr = planarity_radius(m);
        add(pr ? num(*pr) : "inf");
        auto ball = ball_planar_radius(m);
        add(ball ? num(*ball) : "inf");
        if (pr && n >= 2) out.pr_over_log_n = *pr / std::log(static_cast<double>(n));
    } else {
        add("");
        add("");
    }
    if (metrics.systole) {
        auto sys = shortest_non_contractible(m);
        add(sys ? num(sys->length) : "inf");
    } else {
        add("");
    }
    if (metrics.two_cycles) {
        out.x = two_cycle_census(m).nonseparating;
        add(num(*out.x));
    } else {
        add("");
    }
    if (metrics.ct) {
        auto ctb = cycle_with_tail_min(m, ct_cap);
        add(ctb.lower ? num(*ctb.lower) : "inf");
        if (ctb.upper) {
            add(num(*ctb.upper));
            if (n >= 2) out.ct_over_log_n = *ctb.upper / std::log(static_cast<double>(n));
        } else if (!ctb.lower) {
            add("inf");  // planar: no noncontractible cycle to find
        } else {
            add("");
            flags.push_back("ct_capped");
        }
    } else {
        add("");
        add("");
    }
    if (metrics.diameter) {
        auto d = diameter(m, diam_threshold);
        add(num(d.value));
        if (!d.exact) flags.push_back("diam_bound");
    } else {
        add("");
    }
    if (mixing_caveat) flags.push_back("mcmc_mixing_assumed");
    std::string joined;
    for (const char* f : flags) {
        if (!joined.empty()) joined += ';';
        joined += f;
    }
    add(joined);
    out.csv = std::move(row);
    return out;
}

struct CampaignPair {
    int n = 1;
    int g = 0;
    std::optional<int> samples;          // overrides samples_per_pair
    std::optional<SampleMethod> method;  // overrides the campaign-wide method
};

// A pair with every default filled in; the unit the worker pool iterates over.
struct ResolvedPair {
    int n = 0;
    int g = 0;
    int samples = 0;
    SampleMethod method = SampleMethod::exact;
};

struct CampaignConfig {
    // theta-driven ladder: one pair (n, round(theta*n)) per entry of theta_ns,
    // placed before the explicit pairs.
    std::optional<double> theta;
    std::vector<int> theta_ns;
    std::vector<CampaignPair> pairs;
    SampleMethod method = SampleMethod::exact;
    int samples_per_pair = 100;
    std::uint64_t seed = 0;
    std::uint64_t attempt_budget = 10'000'000;
    std::uint64_t mcmc_steps = 10'000;
    std::uint32_t ct_cap = 8;
    std::uint32_t diam_threshold = 4096;
    MetricSet metrics;
    std::string csv_path;  // outputs are written only when a path is set
    std::string summary_path;

    std::vector<ResolvedPair> resolved_pairs() const {
        std::vector<ResolvedPair> out;
        if (theta)
            for (int n : theta_ns)
                out.push_back({n, static_cast<int>(std::lround(*theta * n)), samples_per_pair,
                               method});
        for (const CampaignPair& p : pairs)
            out.push_back(
                {p.n, p.g, p.samples.value_or(samples_per_pair), p.method.value_or(method)});
        return out;
    }

    // Structural problems only. Whether the sampler can actually serve a pair
    // is decided at run time, per pair, so one bad pair cannot sink the rest.
    void validate() const {
        if (theta) {
            if (!(*theta > 0.0 && *theta < 0.5))
                throw std::invalid_argument("theta must lie in (0, 1/2)");
            if (theta_ns.empty()) throw std::invalid_argument("theta requires theta_ns");
        } else if (!theta_ns.empty()) {
            throw std::invalid_argument("theta_ns requires theta");
        }
        if (samples_per_pair < 1) throw std::invalid_argument("samples_per_pair must be >= 1");
        if (ct_cap < 1) throw std::invalid_argument("ct_cap must be >= 1");
        auto rp = resolved_pairs();
        if (rp.empty()) throw std::invalid_argument("campaign has no (n, g) pairs");
        for (const ResolvedPair& p : rp)
            if (p.samples < 1)
                throw std::invalid_argument("pair (" + std::to_string(p.n) + ", " +
                                            std::to_string(p.g) + "): samples must be >= 1");
    }
};

inline CampaignConfig parse_campaign_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    const std::vector<std::string> known = {
        "theta",      "theta_ns",       "pairs",   "method",         "samples_per_pair",
        "seed",       "attempt_budget", "mcmc_steps", "ct_cap",      "diam_threshold",
        "metrics",    "csv",            "summary"};
    for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw std::invalid_argument("unknown config key: " + item.key());
    CampaignConfig cfg;
    try {
        if (j.contains("theta")) cfg.theta = j.at("theta").get<double>();
        if (j.contains("theta_ns")) cfg.theta_ns = j.at("theta_ns").get<std::vector<int>>();
        if (j.contains("pairs")) {
            if (!j.at("pairs").is_array())
                throw std::invalid_argument("pairs must be an array");
            for (const auto& pj : j.at("pairs")) {
                if (!pj.is_object()) throw std::invalid_argument("each pair must be an object");
                for (const auto& item : pj.items())
                    if (item.key() != "n" && item.key() != "g" && item.key() != "samples" &&
                        item.key() != "method")
                        throw std::invalid_argument("unknown pair key: " + item.key());
                CampaignPair p;
                p.n = pj.at("n").get<int>();
                p.g = pj.at("g").get<int>();
                if (pj.contains("samples")) p.samples = pj.at("samples").get<int>();
                if (pj.contains("method"))
                    p.method = parse_method(pj.at("method").get<std::string>());
                cfg.pairs.push_back(p);
            }
        }
        if (j.contains("method")) cfg.method = parse_method(j.at("method").get<std::string>());
        if (j.contains("samples_per_pair"))
            cfg.samples_per_pair = j.at("samples_per_pair").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("attempt_budget"))
            cfg.attempt_budget = j.at("attempt_budget").get<std::uint64_t>();
        if (j.contains("mcmc_steps")) cfg.mcmc_steps = j.at("mcmc_steps").get<std::uint64_t>();
        if (j.contains("ct_cap")) cfg.ct_cap = j.at("ct_cap").get<std::uint32_t>();
        if (j.contains("diam_threshold"))
            cfg.diam_threshold = j.at("diam_threshold").get<std::uint32_t>();
        if (j.contains("metrics"))
            cfg.metrics = MetricSet::from_names(j.at("metrics").get<std::vector<std::string>>());
        if (j.contains("csv")) cfg.csv_path = j.at("csv").get<std::string>();
        if (j.contains("summary")) cfg.summary_path = j.at("summary").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// Two-sided 99% score interval for a binomial proportion. Used for the
// P(X > 0) estimate; "strictly positive with 99% confidence" means low > 0.
inline WilsonInterval wilson_interval_99(std::uint64_t positives, std::uint64_t total) {
    constexpr double z = 2.5758293035489;
    double k = static_cast<double>(total);
    double p = static_cast<double>(positives) / k;
    double z2 = z * z;
    double denom = 1.0 + z2 / k;
    double center = (p + z2 / (2.0 * k)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / k + z2 / (4.0 * k * k)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace detail {

// 25th/50th/75th percentiles with linear interpolation between order
// statistics. Input need not be sorted; must be nonempty.
inline std::array<double, 3> quartiles(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    auto at = [&xs](double p) {
        double h = p * static_cast<double>(xs.size() - 1);
        std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 >= xs.size()) return xs.back();
        return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
    };
    return {at(0.25), at(0.5), at(0.75)};
}

}  // namespace detail

struct PairSummary {
    int n = 0;
    int g = 0;
    SampleMethod method = SampleMethod::exact;
    int requested = 0;
    int completed = 0;
    std::optional<double> mean_x, mean_x2, second_moment_ratio;
    std::optional<double> p_positive, p_positive_se;
    std::optional<WilsonInterval> p_positive_ci;
    std::optional<std::array<double, 3>> pr_over_log_n;  // 25/50/75 percentiles
    std::optional<std::array<double, 3>> ct_over_log_n;
    std::vector<std::string> errors;  // unique messages, first-seen order
};

namespace detail {

inline nlohmann::ordered_json config_json(const CampaignConfig& c) {
    nlohmann::ordered_json j;
    if (c.theta) j["theta"] = *c.theta;
    if (!c.theta_ns.empty()) j["theta_ns"] = c.theta_ns;
    if (!c.pairs.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const CampaignPair& p : c.pairs) {
            nlohmann::ordered_json pj;
            pj["n"] = p.n;
            pj["g"] = p.g;
            if (p.samples) pj["samples"] = *p.samples;
            if (p.method) pj["method"] = to_string(*p.method);
            arr.push_back(pj);
        }
        j["pairs"] = arr;
    }
    j["method"] = to_string(c.method);
    j["samples_per_pair"] = c.samples_per_pair;
    j["seed"] = c.seed;
    j["attempt_budget"] = c.attempt_budget;
    j["mcmc_steps"] = c.mcmc_steps;
    j["ct_cap"] = c.ct_cap;
    j["diam_threshold"] = c.diam_threshold;
    j["metrics"] = c.metrics.names();
    if (!c.csv_path.empty()) j["csv"] = c.csv_path;
    if (!c.summary_path.empty()) j["summary"] = c.summary_path;
    return j;
}

}  // namespace detail

struct RunRecord {
    CampaignConfig config;
    std::vector<ResolvedPair> pairs;
    std::vector<std::string> csv_rows;  // (pair, sample) order; failed draws leave no row
    std::vector<PairSummary> summaries;
    double wall_seconds = 0.0;

    bool clean() const {
        for (const PairSummary& s : summaries)
            if (!s.errors.empty()) return false;
        return true;
    }

    std::string csv_text() const {
        std::string out = kCsvHeader;
        out += '\n';
        for (const std::string& r : csv_rows) {
            out += r;
            out += '\n';
        }
        return out;
    }

    // Everything needed to read the CSV without ambiguity: artifact version,
    // recurrence variant, sampler method, seed, and the config snapshot. Not
    // byte-stable across runs (it carries the wall clock); the CSV is.
    std::string summary_json() const {
        nlohmann::ordered_json j;
        j["artifact"] = kArtifactName;
        j["version"] = kArtifactVersion;
        j["recurrence_variant"] = to_string(RecurrenceVariant::corrected);
        j["seed"] = config.seed;
        j["method"] = to_string(config.method);
        j["config"] = detail::config_json(config);
        auto opt = [](const std::optional<double>& v) {
            return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
        };
        auto quart = [](const std::optional<std::array<double, 3>>& q) {
            if (!q) return nlohmann::ordered_json(nullptr);
            nlohmann::ordered_json out;
            out["q25"] = (*q)[0];
            out["q50"] = (*q)[1];
            out["q75"] = (*q)[2];
            return out;
        };
        auto arr = nlohmann::ordered_json::array();
        for (const PairSummary& s : summaries) {
            nlohmann::ordered_json ps;
            ps["n"] = s.n;
            ps["g"] = s.g;
            ps["method"] = to_string(s.method);
            if (s.method == SampleMethod::mcmc) ps["caveat"] = "subject to mixing assumptions";
            ps["samples_requested"] = s.requested;
            ps["samples_completed"] = s.completed;
            ps["mean_x"] = opt(s.mean_x);
            ps["mean_x2"] = opt(s.mean_x2);
            ps["second_moment_ratio"] = opt(s.second_moment_ratio);
            ps["p_positive"] = opt(s.p_positive);
            ps["p_positive_se"] = opt(s.p_positive_se);
            if (s.p_positive_ci) {
                nlohmann::ordered_json ci;
                ci["low"] = s.p_positive_ci->low;
                ci["high"] = s.p_positive_ci->high;
                ps["p_positive_ci99"] = ci;
            } else {
                ps["p_positive_ci99"] = nullptr;
            }
            ps["pr_over_log_n"] = quart(s.pr_over_log_n);
            ps["ct_over_log_n"] = quart(s.ct_over_log_n);
            if (!s.errors.empty()) ps["errors"] = s.errors;
            arr.push_back(ps);
        }
        j["pairs"] = arr;
        j["wall_seconds"] = wall_seconds;
        return j.dump(2) + "\n";
    }
};

// Worker count: hardware concurrency, capped by GENUSLAB_WORKERS when set,
// never more than there are tasks. A set but unparsable value is an error
// rather than a silent fallback.
inline std::size_t resolve_worker_count(std::size_t tasks) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("GENUSLAB_WORKERS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw std::invalid_argument("GENUSLAB_WORKERS must be a positive integer");
        n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, std::max<std::size_t>(tasks, 1)));
}

// Samples every pair, measures every map, aggregates, writes outputs.
//
// Determinism: task (pair, sample) draws from Rng::stream(seed, pair, sample)
// and touches nothing shared, so rows do not depend on the worker count or on
// scheduling; aggregation then walks slots in task order. A task that throws
// (sampler infeasibility, exhausted budget) records its message against the
// pair and the rest of the campaign proceeds.
inline RunRecord run_campaign(const CampaignConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    RunRecord rec;
    rec.config = cfg;
    rec.pairs = cfg.resolved_pairs();

    struct Task {
        std::size_t pair = 0;
        int sample = 0;
    };
    std::vector<Task> tasks;
    for (std::size_t pi = 0; pi < rec.pairs.size(); ++pi)
        for (int si = 0; si < rec.pairs[pi].samples; ++si) tasks.push_back({pi, si});

    struct Slot {
        bool ok = false;
        MetricRow row;
        std::string error;
    };
    std::vector<Slot> slots(tasks.size());

    auto work = [&](std::size_t ti) {
        const Task& t = tasks[ti];
        const ResolvedPair& p = rec.pairs[t.pair];
        Slot& slot = slots[ti];
        try {
            Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(t.pair),
                                  static_cast<std::uint64_t>(t.sample));
            SamplerSpec spec{p.n, p.g, p.method, cfg.seed, cfg.attempt_budget, cfg.mcmc_steps};
            spec.validate();
            CombinatorialMap m = sample(spec, rng);
            slot.row = metric_row(m, static_cast<std::size_t>(t.sample), p.n, p.g, cfg.metrics,
                                  cfg.ct_cap, cfg.diam_threshold,
                                  p.method == SampleMethod::mcmc);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    };

    std::size_t workers = resolve_worker_count(tasks.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                    work(i);
            });
        for (std::thread& th : pool) th.join();
    }

    std::size_t ti = 0;
    for (std::size_t pi = 0; pi < rec.pairs.size(); ++pi) {
        const ResolvedPair& p = rec.pairs[pi];
        PairSummary s;
        s.n = p.n;
        s.g = p.g;
        s.method = p.method;
        s.requested = p.samples;
        double sum_x = 0.0, sum_x2 = 0.0;
        std::uint64_t n_x = 0, positives = 0;
        std::vector<double> prs, cts;
        for (int si = 0; si < p.samples; ++si, ++ti) {
            Slot& slot = slots[ti];
            if (!slot.ok) {
                if (std::find(s.errors.begin(), s.errors.end(), slot.error) == s.errors.end())
                    s.errors.push_back(slot.error);
                continue;
            }
            ++s.completed;
            rec.csv_rows.push_back(std::move(slot.row.csv));
            if (slot.row.x) {
                double x = static_cast<double>(*slot.row.x);
                sum_x += x;
                sum_x2 += x * x;
                ++n_x;
                if (x > 0) ++positives;
            }
            if (slot.row.pr_over_log_n) prs.push_back(*slot.row.pr_over_log_n);
            if (slot.row.ct_over_log_n) cts.push_back(*slot.row.ct_over_log_n);
        }
        if (n_x > 0) {
            s.mean_x = sum_x / static_cast<double>(n_x);
            s.mean_x2 = sum_x2 / static_cast<double>(n_x);
            if (sum_x2 > 0) s.second_moment_ratio = *s.mean_x * *s.mean_x / *s.mean_x2;
            double p_hat = static_cast<double>(positives) / static_cast<double>(n_x);
            s.p_positive = p_hat;
            s.p_positive_se = std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n_x));
            s.p_positive_ci = wilson_interval_99(positives, n_x);
        }
        if (!prs.empty()) s.pr_over_log_n = detail::quartiles(std::move(prs));
        if (!cts.empty()) s.ct_over_log_n = detail::quartiles(std::move(cts));
        rec.summaries.push_back(std::move(s));
    }

    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!cfg.csv_path.empty()) {
        std::ofstream out(cfg.csv_path);
        if (!out) throw std::runtime_error("cannot write " + cfg.csv_path);
        out << rec.csv_text();
    }
    if (!cfg.summary_path.empty()) {
        std::ofstream out(cfg.summary_path);
        if (!out) throw std::runtime_error("cannot write " + cfg.summary_path);
        out << rec.summary_json();
    }
    return rec;
}

}  // namespace genuslab

#include "covstream/hardgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "covstream/oracles.hpp"

namespace covstream {

DisjInstance sample_disj(std::uint64_t t, DisjSide side, Rng& rng) {
    if (t < 1) throw std::invalid_argument("sample_disj requires t >= 1");
    DisjInstance inst;
    inst.t = t;
    std::vector<Element> a, b;
    for (std::uint64_t e = 0; e < t; ++e) {
        switch (rng.below(3)) {
            case 0: break;                                        // drop from both
            case 1: b.push_back(static_cast<Element>(e)); break;  // drop from A
            default: a.push_back(static_cast<Element>(e)); break; // drop from B
        }
    }
    int z;
    switch (side) {
        case DisjSide::natural: z = rng.coin() ? 1 : 0; break;
        case DisjSide::yes: z = 0; break;
        default: z = 1; break;
    }
    if (z == 1) {
        const Element e_star = static_cast<Element>(rng.below(t));
        a.push_back(e_star);
        b.push_back(e_star);
        inst.e_star = e_star;
    }
    inst.z = z;
    inst.a = ElementSet(std::move(a));
    inst.b = ElementSet(std::move(b));
    return inst;
}

ElementSet MappingExtension::map_set(const ElementSet& a) const {
    std::vector<Element> out;
    out.reserve(a.size() * (t ? n / t : 0));
    for (Element i : a)
        for (Element e : blocks.at(i)) out.push_back(e);
    return ElementSet(std::move(out));
}

MappingExtension sample_mapping_extension(std::uint64_t n, std::uint64_t t, Rng& rng) {
    if (t < 1 || n < 1 || n % t != 0)
        throw std::invalid_argument("mapping extension requires t >= 1 and t | n");
    std::vector<Element> perm(n);
    for (std::uint64_t i = 0; i < n; ++i) perm[i] = static_cast<Element>(i);
    rng.shuffle(perm);

    MappingExtension ext;
    ext.t = t;
    ext.n = n;
    const std::uint64_t block = n / t;
    ext.blocks.reserve(t);
    for (std::uint64_t i = 0; i < t; ++i)
        ext.blocks.push_back(ElementSet(std::vector<Element>(
            perm.begin() + static_cast<std::ptrdiff_t>(i * block),
            perm.begin() + static_cast<std::ptrdiff_t>((i + 1) * block))));
    return ext;
}

std::uint64_t paper_t(std::uint64_t n, std::uint64_t m, std::uint32_t alpha,
                      LogBase log_base) {
    if (m < 2) throw std::invalid_argument("paper_t requires m >= 2");
    if (alpha < 1) throw std::invalid_argument("paper_t requires alpha >= 1");
    const double logm = log_base == LogBase::natural
                            ? std::log(static_cast<double>(m))
                            : std::log2(static_cast<double>(m));
    const double raw = std::pow(static_cast<double>(n) / logm,
                                1.0 / static_cast<double>(alpha)) *
                       std::pow(2.0, -15.0);
    if (raw < 1.0)
        throw std::domain_error("t formula degenerate at this scale (raw value " +
                                std::to_string(raw) + " < 1); pass t explicitly");
    std::uint64_t cap = static_cast<std::uint64_t>(raw);
    if (cap > n) cap = n;
    for (std::uint64_t d = cap; d >= 1; --d)
        if (n % d == 0) return d;
    return 1;
}

namespace {

ElementSet complement_of(const ElementSet& s, std::uint64_t n) {
    Bitmask b = Bitmask::full(n);
    b.subtract(s.to_bitmask(n));
    return ElementSet::from_bitmask(b);
}

}  // namespace

ScHardInstance gen_sc(std::uint64_t n, std::uint64_t m, std::uint64_t t,
                      std::uint32_t alpha, std::optional<int> force_theta, Seed seed) {
    if (m < 1) throw std::invalid_argument("gen_sc requires m >= 1");
    if (t < 1 || n < 1 || n % t != 0)
        throw std::invalid_argument("t must divide n (got n=" + std::to_string(n) +
                                    ", t=" + std::to_string(t) + ")");
    Rng rng(seed);

    ScHardInstance inst{SetSystem(n, {}), n, m, t, alpha, 0, std::nullopt, {}, {}, seed};
    inst.disj.reserve(m);
    inst.maps.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        inst.disj.push_back(sample_disj(t, DisjSide::no, rng));
        inst.maps.push_back(sample_mapping_extension(n, t, rng));
    }

    inst.theta = force_theta ? *force_theta : (rng.coin() ? 1 : 0);
    if (inst.theta == 1) {
        const std::size_t i_star = static_cast<std::size_t>(rng.below(m));
        inst.i_star = i_star;
        inst.disj[i_star] = sample_disj(t, DisjSide::yes, rng);  // f_{i*} unchanged
    }

    std::vector<ElementSet> sets(2 * m);
    for (std::uint64_t i = 0; i < m; ++i) {
        sets[i] = complement_of(inst.maps[i].map_set(inst.disj[i].a), n);
        sets[m + i] = complement_of(inst.maps[i].map_set(inst.disj[i].b), n);
    }
    inst.system = SetSystem(n, std::move(sets));
    return inst;
}

std::vector<std::size_t> PartitionLabels::good_indices() const {
    const std::size_t m = labels.size() / 2;
    std::vector<std::size_t> good;
    for (std::size_t i = 0; i < m; ++i)
        if (labels[i] != labels[m + i]) good.push_back(i);
    return good;
}

PartitionLabels gen_sc_partition(const ScHardInstance& inst, Rng& rng) {
    PartitionLabels p;
    p.labels.resize(inst.system.set_count());
    for (auto& l : p.labels) l = rng.coin() ? 1 : 0;
    return p;
}

std::uint64_t ghd_yes_threshold(std::uint64_t t) {
    return static_cast<std::uint64_t>(
        std::ceil(static_cast<double>(t) / 2.0 + std::sqrt(static_cast<double>(t))));
}

std::uint64_t ghd_no_threshold(std::uint64_t t) {
    const double v = static_cast<double>(t) / 2.0 - std::sqrt(static_cast<double>(t));
    return v <= 0.0 ? 0 : static_cast<std::uint64_t>(std::floor(v));
}

namespace {

ElementSet random_subset_of_size(std::uint64_t t, std::uint64_t size, Rng& rng,
                                 std::vector<Element>& scratch) {
    scratch.resize(t);
    for (std::uint64_t i = 0; i < t; ++i) scratch[i] = static_cast<Element>(i);
    for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t j = i + rng.below(t - i);
        std::swap(scratch[i], scratch[j]);
    }
    return ElementSet(std::vector<Element>(scratch.begin(),
                                           scratch.begin() + static_cast<std::ptrdiff_t>(size)));
}

}  // namespace

GhdPair sample_ghd(std::uint64_t t, std::uint64_t a, std::uint64_t b, GhdSide side,
                   Rng& rng, std::uint64_t max_rejects) {
    if (a > t || b > t) throw std::invalid_argument("sample_ghd requires a, b <= t");
    const std::uint64_t yes_at = ghd_yes_threshold(t);
    const std::uint64_t no_at = ghd_no_threshold(t);

    std::vector<Element> scratch;
    GhdPair pair;
    while (pair.attempts < max_rejects) {
        ++pair.attempts;
        ElementSet ca = random_subset_of_size(t, a, rng, scratch);
        ElementSet cb = random_subset_of_size(t, b, rng, scratch);
        const std::uint64_t delta = hamming_distance(ca, cb);
        const bool accept = side == GhdSide::yes ? delta >= yes_at : delta <= no_at;
        if (accept) {
            pair.a = std::move(ca);
            pair.b = std::move(cb);
            return pair;
        }
    }
    throw SamplingError("sample_ghd: infeasible conditioning after " +
                        std::to_string(max_rejects) + " attempts (t=" +
                        std::to_string(t) + ", a=" + std::to_string(a) +
                        ", b=" + std::to_string(b) + ")");
}

McHardInstance gen_mc(std::uint64_t m, std::uint64_t t1, std::optional<std::uint64_t> a,
                      std::optional<std::uint64_t> b, std::optional<int> force_theta,
                      Seed seed) {
    if (m < 1) throw std::invalid_argument("gen_mc requires m >= 1");
    if (t1 < 4) throw std::invalid_argument("gen_mc requires t1 >= 4");
    const std::uint64_t va = a.value_or(t1 / 2);
    const std::uint64_t vb = b.value_or(t1 / 2);
    if (va > t1 || vb > t1) throw std::invalid_argument("gen_mc requires a, b <= t1");

    Rng rng(seed);
    const std::uint64_t t2 = 10 * t1;
    const std::uint64_t n = t1 + t2;

    McHardInstance inst{SetSystem(n, {}), m,  t1,           t2, va, vb, 0,
                        std::nullopt,     {}, {},           0.0, seed};
    inst.ghd.reserve(m);
    inst.partitions.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        GhdPair pr = sample_ghd(t1, va, vb, GhdSide::no, rng);
        inst.ghd.emplace_back(std::move(pr.a), std::move(pr.b));
        std::vector<Element> c, d;
        for (std::uint64_t e = t1; e < n; ++e) {
            if (rng.coin())
                c.push_back(static_cast<Element>(e));
            else
                d.push_back(static_cast<Element>(e));
        }
        inst.partitions.emplace_back(ElementSet(std::move(c)), ElementSet(std::move(d)));
    }

    inst.theta = force_theta ? *force_theta : (rng.coin() ? 1 : 0);
    if (inst.theta == 1) {
        const std::size_t i_star = static_cast<std::size_t>(rng.below(m));
        inst.i_star = i_star;
        GhdPair pr = sample_ghd(t1, va, vb, GhdSide::yes, rng);  // C, D unchanged
        inst.ghd[i_star] = {std::move(pr.a), std::move(pr.b)};
    }

    inst.tau = static_cast<double>(t2) + static_cast<double>(va + vb) / 2.0 +
               static_cast<double>(t1) / 4.0;

    std::vector<ElementSet> sets(2 * m);
    for (std::uint64_t i = 0; i < m; ++i) {
        sets[i] = set_union(inst.ghd[i].first, inst.partitions[i].first);
        sets[m + i] = set_union(inst.ghd[i].second, inst.partitions[i].second);
    }
    inst.system = SetSystem(n, std::move(sets));
    return inst;
}

// ---------------------------------------------------------------------------
// Metadata sidecars
// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_array(const ElementSet& s) {
    ordered_json arr = ordered_json::array();
    for (Element e : s) arr.push_back(e);
    return arr;
}

ordered_json labels_array(const PartitionLabels& labels) {
    ordered_json arr = ordered_json::array();
    for (auto l : labels.labels) arr.push_back(static_cast<int>(l));
    return arr;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string meta_json(const ScHardInstance& inst, const MetaOptions& opts) {
    ordered_json j;
    j["generator"] = "sc";
    j["seed"] = inst.seed.value;
    j["params"] = {{"n", inst.n}, {"m", inst.m}, {"t", inst.t}, {"alpha", inst.alpha}};
    j["theta"] = inst.theta;
    j["i_star"] = inst.i_star ? ordered_json(*inst.i_star) : ordered_json(nullptr);
    if (opts.labels) j["labels"] = labels_array(*opts.labels);
    if (opts.full_witness) {
        ordered_json w;
        w["disj"] = ordered_json::array();
        for (const auto& d : inst.disj) {
            ordered_json dj;
            dj["A"] = to_array(d.a);
            dj["B"] = to_array(d.b);
            dj["Z"] = d.z;
            dj["e_star"] = d.e_star ? ordered_json(*d.e_star) : ordered_json(nullptr);
            w["disj"].push_back(std::move(dj));
        }
        w["blocks"] = ordered_json::array();
        for (const auto& f : inst.maps) {
            ordered_json fj = ordered_json::array();
            for (const auto& blk : f.blocks) fj.push_back(to_array(blk));
            w["blocks"].push_back(std::move(fj));
        }
        j["witness"] = std::move(w);
    }
    return dump(j);
}

std::string meta_json(const McHardInstance& inst, const MetaOptions& opts) {
    ordered_json j;
    j["generator"] = "mc";
    j["seed"] = inst.seed.value;
    j["params"] = {{"m", inst.m}, {"t1", inst.t1}, {"t2", inst.t2},
                   {"a", inst.a}, {"b", inst.b}};
    j["theta"] = inst.theta;
    j["i_star"] = inst.i_star ? ordered_json(*inst.i_star) : ordered_json(nullptr);
    if (inst.tau == std::floor(inst.tau))
        j["tau"] = static_cast<std::int64_t>(inst.tau);
    else
        j["tau"] = inst.tau;
    if (opts.labels) j["labels"] = labels_array(*opts.labels);
    if (opts.full_witness) {
        ordered_json w;
        w["ghd"] = ordered_json::array();
        for (const auto& [ga, gb] : inst.ghd)
            w["ghd"].push_back({{"A", to_array(ga)}, {"B", to_array(gb)}});
        w["partitions"] = ordered_json::array();
        for (const auto& [c, d] : inst.partitions)
            w["partitions"].push_back({{"C", to_array(c)}, {"D", to_array(d)}});
        j["witness"] = std::move(w);
    }
    return dump(j);
}

std::string meta_json(const DisjInstance& inst, Seed seed, const MetaOptions& opts) {
    ordered_json j;
    j["generator"] = "disj";
    j["seed"] = seed.value;
    j["params"] = {{"t", inst.t}};
    j["theta"] = inst.z;
    j["i_star"] = nullptr;
    j["e_star"] = inst.e_star ? ordered_json(*inst.e_star) : ordered_json(nullptr);
    if (opts.full_witness) {
        j["witness"] = {{"A", to_array(inst.a)}, {"B", to_array(inst.b)}};
    }
    return dump(j);
}

void write_meta(const std::string& json_text, const std::filesystem::path& instance_path) {
    const std::filesystem::path meta_path =
        instance_path.string() + ".meta.json";
    std::ofstream out(meta_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + meta_path.string());
    out << json_text;
    if (!out) throw IoError("write failed: " + meta_path.string());
}

}  // namespace covstream

#include "strauto/counting.hh"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "internal.hh"

namespace strauto {

namespace {

// Counts, for each left word u, the number of distinct right words v accepted
// by a 2-track relation, saturating at cap+1.  Right-word prefixes of the
// current left prefix are partitioned by the subset of states they reach;
// counts per subset evolve deterministically, so the map subset->count (the
// "profile") is a sufficient summary.  A breadth-first search over profiles
// (branching on the next left letter) finds the maximizing u.

struct Machine {
    const MultiTrackNfa& rel;
    Letter pad;
    uint64_t cap;  // counts saturate at cap + 1

    std::vector<std::vector<uint32_t>> by_src;
    std::vector<char> fin;

    std::unordered_map<std::vector<uint32_t>, uint32_t, detail::U32VecHash> sub_intern;
    std::vector<std::vector<State>> subsets;
    std::vector<char> sub_final;

    // Per (subset, left letter): subset after the right track pads out, and
    // the letter classes extending the right track (multiplier, successor).
    struct StepInfo {
        uint32_t pad_img;  // kNone when the image is empty
        std::vector<std::pair<uint64_t, uint32_t>> classes;
    };
    static constexpr uint32_t kNone = 0xFFFFFFFFu;
    std::unordered_map<uint64_t, StepInfo, detail::U64Hash> step_cache;

    Machine(const MultiTrackNfa& r, uint64_t c)
        : rel(r), pad(r.alphabet.pad()), cap(c), by_src(r.num_states), fin(r.final_mask()) {
        if (rel.tracks != 2) throw Error("out-degree counting expects a 2-track relation");
        for (uint32_t i = 0; i < rel.transitions.size(); ++i)
            by_src[rel.transitions[i].src].push_back(i);
    }

    uint64_t sat_add(uint64_t a, uint64_t b) const { return std::min(a + b, cap + 1); }
    uint64_t sat_mul(uint64_t a, uint64_t b) const {
        if (a == 0 || b == 0) return 0;
        if (a > (cap + 1) / b) return cap + 1;
        return std::min(a * b, cap + 1);
    }

    uint32_t intern_subset(std::vector<State> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto it = sub_intern.find(s);
        if (it != sub_intern.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(subsets.size());
        bool f = false;
        for (State q : s)
            if (fin[q]) f = true;
        sub_intern.emplace(s, id);
        subsets.push_back(std::move(s));
        sub_final.push_back(f);
        return id;
    }

    const StepInfo& step(uint32_t sid, Letter x) {
        uint64_t key = (static_cast<uint64_t>(sid) << 32) | x;
        auto it = step_cache.find(key);
        if (it != step_cache.end()) return it->second;

        StepInfo info;
        // Right track pads out: v ends here (or had ended already).
        std::vector<State> pad_dsts;
        std::vector<TrackSet> sets;
        std::vector<uint32_t> live;
        for (State q : subsets[sid])
            for (uint32_t ti : by_src[q]) {
                const Transition& tr = rel.transitions[ti];
                if (!tr.label[0].member(x)) continue;
                if (tr.label[1].member(pad)) pad_dsts.push_back(tr.dst);
                sets.push_back(tr.label[1]);
                live.push_back(ti);
            }
        if (!pad_dsts.empty())
            info.pad_img = intern_subset(std::move(pad_dsts));
        else
            info.pad_img = kNone;

        // Partition right letters (excluding pad) into classes firing the same
        // transition set.
        Letter uni = rel.universe();
        TrackSet base;
        base.exclude = true;
        base.items = {pad};
        for (const TrackSet& atom : atomize(base, sets, uni)) {
            Letter probe = *atom.least(uni);
            std::vector<State> dsts;
            for (size_t i = 0; i < live.size(); ++i)
                if (sets[i].member(probe)) dsts.push_back(rel.transitions[live[i]].dst);
            if (dsts.empty()) continue;
            uint64_t mult = atom.count(uni);
            info.classes.emplace_back(mult, intern_subset(std::move(dsts)));
        }
        auto [pos, ignored] = step_cache.emplace(key, std::move(info));
        return pos->second;
    }
};

// A profile: counts of distinct right-word prefixes (still extendable) and of
// distinct completed right words, both keyed by reached subset.
struct Profile {
    std::map<uint32_t, uint64_t> active;
    std::map<uint32_t, uint64_t> done;

    std::vector<uint32_t> canonical() const {
        std::vector<uint32_t> key;
        key.reserve(active.size() * 3 + done.size() * 3 + 1);
        for (auto& [sid, c] : active) {
            key.push_back(sid);
            key.push_back(static_cast<uint32_t>(c >> 32));
            key.push_back(static_cast<uint32_t>(c));
        }
        key.push_back(0xFFFFFFFFu);
        for (auto& [sid, c] : done) {
            key.push_back(sid);
            key.push_back(static_cast<uint32_t>(c >> 32));
            key.push_back(static_cast<uint32_t>(c));
        }
        return key;
    }
};

}  // namespace

OutDegreeResult max_out_degree(const MultiTrackNfa& rel, uint64_t cap,
                               const ExploreLimits& lim) {
    rel.check();
    Machine m(rel, cap);
    Letter pad = m.pad;
    size_t nletters = rel.alphabet.size();

    // Counts v with (u, v) accepted: completed words still alive plus active
    // prefixes accepted as-is plus extensions of active prefixes by pad steps
    // on the left track.
    auto total_of = [&](const Profile& p) -> uint64_t {
        uint64_t total = 0;
        for (auto& [sid, c] : p.done)
            if (m.sub_final[sid]) total = m.sat_add(total, c);
        for (auto& [sid, c] : p.active)
            if (m.sub_final[sid]) total = m.sat_add(total, c);
        // Pad phase: left track padded, right track keeps reading letters.
        std::map<uint32_t, uint64_t> cur = p.active;
        std::map<std::vector<uint32_t>, uint64_t> seen;
        while (!cur.empty() && total <= cap) {
            std::vector<uint32_t> key;
            for (auto& [sid, c] : cur) {
                key.push_back(sid);
                key.push_back(static_cast<uint32_t>(c >> 32));
                key.push_back(static_cast<uint32_t>(c));
            }
            auto it = seen.find(key);
            if (it != seen.end()) {
                if (total > it->second) return cap + 1;  // productive cycle
                break;
            }
            seen.emplace(std::move(key), total);
            std::map<uint32_t, uint64_t> next;
            for (auto& [sid, c] : cur)
                for (auto& [mult, dst] : m.step(sid, pad).classes) {
                    uint64_t& slot = next[dst];
                    slot = m.sat_add(slot, m.sat_mul(c, mult));
                }
            for (auto& [sid, c] : next)
                if (m.sub_final[sid]) total = m.sat_add(total, c);
            cur = std::move(next);
        }
        return total;
    };

    // Breadth-first search over profiles, branching on the next left letter.
    std::unordered_map<std::vector<uint32_t>, uint32_t, detail::U32VecHash> intern;
    std::vector<Profile> profiles;
    std::vector<std::pair<uint32_t, Letter>> parents;

    Profile init;
    if (!rel.initial.empty()) init.active[m.intern_subset(rel.initial)] = 1;

    OutDegreeResult best;
    best.value = 0;
    best.exceeds_cap = false;

    auto witness_of = [&](uint32_t id) {
        Word u;
        for (; id != 0; id = parents[id].first) u.push_back(parents[id].second);
        std::reverse(u.begin(), u.end());
        return u;
    };

    intern.emplace(init.canonical(), 0);
    profiles.push_back(std::move(init));
    parents.push_back({0, 0});

    {
        uint64_t t = total_of(profiles[0]);
        if (t > best.value) {
            best.value = t;
            best.witness = Word{};
        }
    }
    if (best.value > cap) {
        best.exceeds_cap = true;
        best.value = cap + 1;
        return best;
    }

    std::deque<uint32_t> queue{0};
    while (!queue.empty()) {
        uint32_t cur = queue.front();
        queue.pop_front();
        for (Letter x = 0; x < nletters; ++x) {
            Profile next;
            const Profile& p = profiles[cur];
            for (auto& [sid, c] : p.done) {
                uint32_t img = m.step(sid, x).pad_img;
                if (img == Machine::kNone) continue;
                uint64_t& slot = next.done[img];
                slot = m.sat_add(slot, c);
            }
            for (auto& [sid, c] : p.active) {
                const auto& info = m.step(sid, x);
                if (info.pad_img != Machine::kNone) {
                    uint64_t& slot = next.done[info.pad_img];
                    slot = m.sat_add(slot, c);
                }
                for (auto& [mult, dst] : info.classes) {
                    uint64_t& slot = next.active[dst];
                    slot = m.sat_add(slot, m.sat_mul(c, mult));
                }
            }
            if (next.active.empty() && next.done.empty()) continue;
            std::vector<uint32_t> key = next.canonical();
            if (intern.count(key)) continue;
            if (profiles.size() >= lim.max_states)
                throw ResourceError("out-degree search exceeded the profile budget");
            uint32_t id = static_cast<uint32_t>(profiles.size());
            intern.emplace(std::move(key), id);
            profiles.push_back(std::move(next));
            parents.push_back({cur, x});
            uint64_t t = total_of(profiles[id]);
            if (t > best.value) {
                best.value = t;
                best.witness = witness_of(id);
                if (t > cap) {
                    best.exceeds_cap = true;
                    best.value = cap + 1;
                    return best;
                }
            }
            queue.push_back(id);
        }
    }
    return best;
}

}  // namespace strauto

#include "strauto/product.hh"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "internal.hh"

namespace strauto {

void Component::set_tracks(std::vector<int> tracks) {
    if (tracks.empty()) throw Error("component needs at least one track");
    tracks_ = std::move(tracks);
    last_track_ = *std::max_element(tracks_.begin(), tracks_.end());
}

namespace {

constexpr uint32_t kEndedOk = 0xFFFFFFFFu;    // positive: restriction accepted
constexpr uint32_t kEndedIn = 0xFFFFFFFFu;    // complement: restriction in L
constexpr uint32_t kEndedOut = 0xFFFFFFFEu;   // complement: restriction not in L

// Subset simulation of one automaton along the restriction of joint letters
// to the component's tracks.
struct SubsetMachine {
    MultiTrackNfa aut;
    std::vector<int> tracks;
    std::vector<std::vector<uint32_t>> by_src;
    std::vector<char> fin;
    Letter pad;
    std::unordered_map<std::vector<uint32_t>, uint32_t, detail::U32VecHash> intern;
    std::vector<std::vector<State>> subsets;

    SubsetMachine(const MultiTrackNfa& a, std::vector<int> tr)
        : aut(a), tracks(std::move(tr)), by_src(a.num_states), fin(a.final_mask()),
          pad(a.alphabet.pad()) {
        if (static_cast<int>(tracks.size()) != a.tracks)
            throw Error("component track list does not match automaton width");
        for (uint32_t i = 0; i < aut.transitions.size(); ++i)
            by_src[aut.transitions[i].src].push_back(i);
    }

    uint32_t intern_subset(std::vector<State> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto it = intern.find(s);
        if (it != intern.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(subsets.size());
        if (id >= kEndedOut) throw ResourceError("component subset space exhausted");
        intern.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    }

    uint32_t initial() { return intern_subset(aut.initial); }

    bool restriction_all_pad(const Letter* joint) const {
        for (int t : tracks)
            if (joint[t] != pad) return false;
        return true;
    }

    uint32_t step(uint32_t id, const Letter* joint) {
        std::vector<Letter> local(tracks.size());
        for (size_t i = 0; i < tracks.size(); ++i) local[i] = joint[tracks[i]];
        std::vector<State> next;
        for (State s : subsets[id])
            for (uint32_t ti : by_src[s])
                if (label_matches(aut.transitions[ti].label, local.data()))
                    next.push_back(aut.transitions[ti].dst);
        return intern_subset(std::move(next));
    }

    bool subset_final(uint32_t id) const {
        for (State s : subsets[id])
            if (fin[s]) return true;
        return false;
    }
};

}  // namespace

// -------------------------------------------------------- PositiveComponent

struct PositiveComponent::Impl {
    SubsetMachine m;
    Impl(const MultiTrackNfa& a, std::vector<int> tr) : m(a, std::move(tr)) {}
};

PositiveComponent::PositiveComponent(const MultiTrackNfa& aut, std::vector<int> tracks) {
    set_tracks(tracks);
    impl_ = std::make_shared<Impl>(aut, std::move(tracks));
}

uint32_t PositiveComponent::initial_state() { return impl_->m.initial(); }

bool PositiveComponent::advance(uint32_t state, const Letter* letters, uint32_t& out) {
    auto& m = impl_->m;
    if (m.restriction_all_pad(letters)) {
        if (state == kEndedOk) {
            out = kEndedOk;
            return true;
        }
        if (!m.subset_final(state)) return false;  // restriction ended outside L
        out = kEndedOk;
        return true;
    }
    if (state == kEndedOk) return false;  // cannot resume after padding
    uint32_t next = m.step(state, letters);
    if (m.subsets[next].empty()) return false;
    out = next;
    return true;
}

bool PositiveComponent::accepting(uint32_t state) {
    return state == kEndedOk || impl_->m.subset_final(state);
}

uint64_t PositiveComponent::state_count() const { return impl_->m.subsets.size(); }

// ------------------------------------------------------ ComplementComponent

struct ComplementComponent::Impl {
    SubsetMachine m;
    Impl(const MultiTrackNfa& a, std::vector<int> tr) : m(a, std::move(tr)) {}
};

ComplementComponent::ComplementComponent(const MultiTrackNfa& aut,
                                         std::vector<int> tracks) {
    set_tracks(tracks);
    impl_ = std::make_shared<Impl>(aut, std::move(tracks));
}

uint32_t ComplementComponent::initial_state() { return impl_->m.initial(); }

bool ComplementComponent::advance(uint32_t state, const Letter* letters, uint32_t& out) {
    auto& m = impl_->m;
    if (state == kEndedIn || state == kEndedOut) {
        out = state;  // verdict frozen once the restriction ended
        return true;
    }
    if (m.restriction_all_pad(letters)) {
        out = m.subset_final(state) ? kEndedIn : kEndedOut;
        return true;
    }
    out = m.step(state, letters);
    return true;
}

bool ComplementComponent::accepting(uint32_t state) {
    if (state == kEndedIn) return false;
    if (state == kEndedOut) return true;
    return !impl_->m.subset_final(state);
}

uint64_t ComplementComponent::state_count() const { return impl_->m.subsets.size(); }

// --------------------------------------------------------- product engine

ProductEmptiness product_emptiness(int tracks, const Alphabet& alphabet,
                                   const std::vector<Component*>& components,
                                   const ExploreLimits& lim) {
    if (tracks < 1) throw Error("product engine needs at least one track");
    if (tracks > 30) throw Error("product engine supports at most 30 tracks");
    for (Component* c : components)
        for (int t : c->tracks())
            if (t < 0 || t >= tracks) throw Error("component track out of range");
    Letter pad = alphabet.pad();
    size_t nc = components.size();

    std::unordered_map<std::vector<uint32_t>, uint32_t, detail::U32VecHash> intern;
    std::vector<std::vector<uint32_t>> states;
    std::vector<uint32_t> masks;
    std::vector<std::pair<uint32_t, std::vector<Letter>>> parents;

    auto accepting_all = [&](const std::vector<uint32_t>& cs) {
        for (size_t i = 0; i < nc; ++i)
            if (!components[i]->accepting(cs[i])) return false;
        return true;
    };

    std::vector<uint32_t> init(nc);
    for (size_t i = 0; i < nc; ++i) init[i] = components[i]->initial_state();

    ProductEmptiness res;
    auto finish = [&](std::optional<ConvWord> w) {
        res.witness = std::move(w);
        res.stats.joint_states = states.size();
        for (Component* c : components)
            res.stats.peak_component_states =
                std::max(res.stats.peak_component_states, c->state_count());
        return res;
    };

    if (accepting_all(init)) {
        ConvWord w;
        w.tracks = tracks;
        return finish(std::move(w));
    }
    {
        std::vector<uint32_t> key = init;
        key.push_back(0x80000000u);
        intern.emplace(std::move(key), 0);
        states.push_back(init);
        masks.push_back(0);
        parents.push_back({0, {}});
    }

    std::vector<std::vector<int>> by_last(tracks);
    for (size_t i = 0; i < nc; ++i) by_last[components[i]->last_track()].push_back(i);

    std::deque<uint32_t> queue{0};
    std::optional<uint32_t> found;

    std::vector<Letter> tuple(tracks);
    std::vector<std::vector<uint32_t>> depth(tracks + 1);

    while (!queue.empty() && !found) {
        uint32_t cur = queue.front();
        queue.pop_front();
        uint32_t mask = masks[cur];
        depth[0] = states[cur];

        std::function<void(int)> rec = [&](int t) {
            if (found) return;
            if (t == tracks) {
                bool all_pad = true;
                uint32_t mask2 = mask;
                for (int i = 0; i < tracks; ++i) {
                    if (tuple[i] == pad)
                        mask2 |= 1u << i;
                    else
                        all_pad = false;
                }
                if (all_pad) return;
                std::vector<uint32_t> key = depth[tracks];
                key.push_back(0x80000000u | mask2);
                auto it = intern.find(key);
                if (it != intern.end()) return;
                if (states.size() >= lim.max_states)
                    throw ResourceError("product exploration exceeded the state budget");
                uint32_t id = static_cast<uint32_t>(states.size());
                intern.emplace(std::move(key), id);
                states.push_back(depth[tracks]);
                masks.push_back(mask2);
                parents.push_back({cur, tuple});
                if (accepting_all(depth[tracks])) {
                    found = id;
                    return;
                }
                queue.push_back(id);
                return;
            }
            Letter from = (mask >> t & 1) ? pad : 0;
            for (Letter l = from; l <= pad && !found; ++l) {
                tuple[t] = l;
                depth[t + 1] = depth[t];
                bool ok = true;
                for (int ci : by_last[t]) {
                    uint32_t next;
                    if (!components[ci]->advance(depth[t + 1][ci], tuple.data(), next)) {
                        ok = false;
                        break;
                    }
                    depth[t + 1][ci] = next;
                }
                if (ok) rec(t + 1);
            }
        };
        rec(0);
    }

    if (!found) return finish(std::nullopt);

    std::vector<std::vector<Letter>> tuples;
    for (uint32_t id = *found; id != 0; id = parents[id].first)
        tuples.push_back(parents[id].second);
    std::reverse(tuples.begin(), tuples.end());
    ConvWord w;
    w.tracks = tracks;
    w.tuples = std::move(tuples);
    return finish(std::move(w));
}

}  // namespace strauto

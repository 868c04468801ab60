#pragma once

#include <memory>

#include "strauto/nfa.hh"

namespace strauto {

/// One factor of a lazy intersection product. A component watches a subset of
/// the joint tracks; the engine drives it with whole joint letter tuples (the
/// component indexes them via tracks()). States are component-interned ids.
///
/// advance returns false to veto the letter (prune the joint branch).
/// The engine guarantees global end-padding discipline, so a component never
/// sees one of its tracks resume after padding.
class Component {
  public:
    virtual ~Component() = default;
    const std::vector<int>& tracks() const { return tracks_; }
    int last_track() const { return last_track_; }
    virtual uint32_t initial_state() = 0;
    virtual bool advance(uint32_t state, const Letter* letters, uint32_t& out) = 0;
    virtual bool accepting(uint32_t state) = 0;
    virtual uint64_t state_count() const = 0;

  protected:
    void set_tracks(std::vector<int> tracks);
    std::vector<int> tracks_;
    int last_track_ = 0;
};

/// Accepts when the restriction of the joint word to the watched tracks lies
/// in L(aut). Blocks when the restriction ends outside the language or the
/// reachable subset empties.
class PositiveComponent : public Component {
  public:
    PositiveComponent(const MultiTrackNfa& aut, std::vector<int> tracks);
    uint32_t initial_state() override;
    bool advance(uint32_t state, const Letter* letters, uint32_t& out) override;
    bool accepting(uint32_t state) override;
    uint64_t state_count() const override;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Accepts when the restriction is NOT in L(aut). Never blocks; the verdict
/// freezes once the watched tracks are all padded.
class ComplementComponent : public Component {
  public:
    ComplementComponent(const MultiTrackNfa& aut, std::vector<int> tracks);
    uint32_t initial_state() override;
    bool advance(uint32_t state, const Letter* letters, uint32_t& out) override;
    bool accepting(uint32_t state) override;
    uint64_t state_count() const override;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

struct ProductStats {
    uint64_t joint_states = 0;
    uint64_t peak_component_states = 0;
};

struct ProductEmptiness {
    std::optional<ConvWord> witness;
    ProductStats stats;
    bool empty() const { return !witness.has_value(); }
};

/// Emptiness of the intersection of all components over `tracks` joint tracks,
/// by breadth-first exploration of concrete letter tuples (valid convolutions
/// only). Returns the shortest witness, ties broken lexicographically with
/// padding last. Throws ResourceError past lim.max_states joint states.
ProductEmptiness product_emptiness(int tracks, const Alphabet& alphabet,
                                   const std::vector<Component*>& components,
                                   const ExploreLimits& lim = {});

}  // namespace strauto

#pragma once

#include "sep/enumeration.hpp"
#include "sep/exact.hpp"

namespace sep {

// How a dominance query was decided.
enum class DominanceRoute { UpSets, MaxFlow };

struct DominanceResult {
    bool dominates = false;
    DominanceRoute route = DominanceRoute::UpSets;
    // Witness up-set (indices into the enumeration) when the answer is
    // negative and the up-set route ran; empty otherwise.
    std::vector<size_t> witness;
};

// Tests p >= q in the stochastic order induced by the componentwise partial
// order on particle configurations (prefix-sum order). Small posets are
// decided by enumerating up-sets; larger ones by a max-flow feasibility test
// on the Hasse closure (Strassen's theorem). `upset_cap` bounds the up-set
// enumeration before falling back to flow.
DominanceResult stochastic_dominance(const Distribution& p, const Distribution& q,
                                     const StateEnumeration& states,
                                     size_t upset_cap = 2'000'000);

}  // namespace sep

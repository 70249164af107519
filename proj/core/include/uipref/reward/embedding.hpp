#pragma once

#include <string>
#include <string_view>

#include "uipref/gateway/backends.hpp"

namespace uipref::gateway {
class Gateway;
}

namespace uipref::reward {

using gateway::EmbeddingVector;

struct PromptSet {
    std::string positive;
    std::string negative;
    std::string empty;
};

PromptSet build_prompts(std::string_view description);

struct PromptEmbeddingSet {
    EmbeddingVector v_pos;
    EmbeddingVector v_neg;
    EmbeddingVector v_empty;
};

inline constexpr double kNegativeWeight = 0.5;
inline constexpr double kNegativeMix = 0.9;
inline constexpr double kEmptyMix = 0.1;

/// v* = v_pos - 0.5 * (0.9 * v_neg + 0.1 * v_empty), left unnormalized.
EmbeddingVector combine(const PromptEmbeddingSet& p);

/// Embeds the three prompts for a description and combines them.
EmbeddingVector text_direction(gateway::Gateway& gateway, std::string_view description);

}  // namespace uipref::reward

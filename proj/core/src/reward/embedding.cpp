#include "uipref/reward/embedding.hpp"

#include "uipref/common/error.hpp"
#include "uipref/gateway/generation.hpp"
#include "uipref/gateway/prompts.hpp"

namespace uipref::reward {

PromptSet build_prompts(std::string_view description) {
    if (description.empty()) throw ValidationError("description", "description is empty");
    return {gateway::positive_prompt(description), gateway::negative_prompt(description), gateway::empty_prompt()};
}

EmbeddingVector combine(const PromptEmbeddingSet& p) {
    if (p.v_pos.size() != p.v_neg.size() || p.v_pos.size() != p.v_empty.size()) {
        throw Error(ErrorKind::kConfiguration, "prompt embeddings have different dimensions");
    }
    return p.v_pos - kNegativeWeight * (kNegativeMix * p.v_neg + kEmptyMix * p.v_empty);
}

EmbeddingVector text_direction(gateway::Gateway& gw, std::string_view description) {
    const auto prompts = build_prompts(description);
    return combine({gw.embed(gateway::EmbedKind::kText, prompts.positive),
                    gw.embed(gateway::EmbedKind::kText, prompts.negative),
                    gw.embed(gateway::EmbedKind::kText, prompts.empty)});
}

}  // namespace uipref::reward

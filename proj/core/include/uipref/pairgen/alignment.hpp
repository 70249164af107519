#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "uipref/corpus/store.hpp"
#include "uipref/pairgen/scoring.hpp"

namespace uipref::pairgen {

struct PairSelection {
    std::size_t batch = 0;     // index into the scored list
    std::size_t chosen = 0;    // index into that batch's scores
    std::size_t rejected = 0;
};

struct SelectionResult {
    std::vector<PairSelection> selections;
    std::size_t skipped = 0;  // batches with fewer than two finite scores
};

/// Chosen = highest finite score (lower batch index on ties); each rejected
/// is drawn uniformly from the other finite-scored candidates, without
/// replacement when more than one pair per description is requested.
SelectionResult select_pairs(std::span<const ScoredBatch> scored, std::mt19937_64& rng,
                             int pairs_per_description = 1);

struct AlignmentPair {
    std::string description_id;
    std::string prompt;  // full generation prompt
    std::string chosen;
    std::string rejected;
    std::string chosen_id;
    std::string rejected_id;
    double chosen_score = 0;
    double rejected_score = 0;
};

struct AlignmentResult {
    std::vector<AlignmentPair> pairs;
    std::size_t skipped = 0;  // unusable batches plus identical-markup draws
};

AlignmentResult build_alignment_pairs(std::span<const ScoredBatch> scored, const corpus::CorpusStore& store,
                                      std::mt19937_64& rng, int pairs_per_description = 1);

}  // namespace uipref::pairgen

#pragma once

#include <cstddef>
#include <filesystem>

#include "uipref/corpus/store.hpp"
#include "uipref/corpus/types.hpp"

namespace uipref::corpus {

/// Writes one line per pair: {description, description_id, chosen, rejected,
/// provenance, annotator_id}. Every pair is checked against the store first;
/// a dangling reference aborts the export before anything is written.
std::size_t export_preferences(const PreferenceDataset& dataset, const CorpusStore& store,
                               const std::filesystem::path& destination);

PreferenceDataset import_preferences(const std::filesystem::path& source);

}  // namespace uipref::corpus

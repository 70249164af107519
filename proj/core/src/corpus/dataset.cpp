#include "uipref/corpus/dataset.hpp"

#include <sstream>

#include "uipref/common/error.hpp"
#include "uipref/common/jsonl.hpp"

namespace uipref::corpus {

std::string_view to_string(Split split) { return split == Split::kTrain ? "train" : "eval"; }

Split parse_split(std::string_view text) {
    if (text == "train") return Split::kTrain;
    if (text == "eval") return Split::kEval;
    throw ValidationError("split", "expected train or eval, got '" + std::string(text) + "'");
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::kRanking: return "ranking";
        case Provenance::kCommenting: return "commenting";
        case Provenance::kSketching: return "sketching";
        case Provenance::kRevising: return "revising";
        case Provenance::kSynthetic: return "synthetic";
    }
    return "unknown";
}

Provenance parse_provenance(std::string_view text) {
    for (auto p : kAllProvenances) {
        if (to_string(p) == text) return p;
    }
    throw ValidationError("provenance", "unknown provenance '" + std::string(text) + "'");
}

PreferenceDataset::PreferenceDataset(std::vector<PreferencePair> pairs) {
    for (auto& p : pairs) add(std::move(p));
}

void PreferenceDataset::add(PreferencePair pair) {
    if (pair.chosen_ref == pair.rejected_ref) {
        throw Error(ErrorKind::kIntegrity, "preference pair has identical chosen and rejected refs");
    }
    ++counts_[static_cast<std::size_t>(pair.provenance)];
    pairs_.push_back(std::move(pair));
}

std::size_t export_preferences(const PreferenceDataset& dataset, const CorpusStore& store,
                               const std::filesystem::path& destination) {
    std::ostringstream out;
    for (std::size_t i = 0; i < dataset.pairs().size(); ++i) {
        const auto& p = dataset.pairs()[i];
        try {
            store.check_pair(p);
        } catch (const Error& e) {
            throw Error(ErrorKind::kIntegrity, "pair #" + std::to_string(i) + ": " + e.what());
        }
        Json record{{"description", store.description(p.description_id).text},
                    {"description_id", p.description_id},
                    {"chosen", p.chosen_ref},
                    {"rejected", p.rejected_ref},
                    {"provenance", to_string(p.provenance)},
                    {"annotator_id", p.annotator_id}};
        out << to_line(record) << '\n';
    }
    write_text_file(destination, out.str());
    return dataset.size();
}

PreferenceDataset import_preferences(const std::filesystem::path& source) {
    PreferenceDataset dataset;
    for (const auto& r : read_jsonl(source)) {
        PreferencePair p;
        p.description_id = r.at("description_id").get<std::string>();
        p.chosen_ref = r.at("chosen").get<std::string>();
        p.rejected_ref = r.at("rejected").get<std::string>();
        p.provenance = parse_provenance(r.at("provenance").get<std::string>());
        p.annotator_id = r.value("annotator_id", "");
        dataset.add(std::move(p));
    }
    return dataset;
}

}  // namespace uipref::corpus

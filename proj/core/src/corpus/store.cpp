#include "uipref/corpus/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "uipref/common/error.hpp"
#include "uipref/common/hash.hpp"
#include "uipref/corpus/text.hpp"

namespace uipref::corpus {

namespace fs = std::filesystem;

namespace {

std::string_view to_string(BatchKind kind) {
    return kind == BatchKind::kGeneration ? "generation" : "revision";
}

BatchKind parse_batch_kind(std::string_view s) {
    if (s == "generation") return BatchKind::kGeneration;
    if (s == "revision") return BatchKind::kRevision;
    throw Error(ErrorKind::kValidation, "unknown batch kind '" + std::string(s) + "'");
}

Json pair_to_json(const PreferencePair& p) {
    return Json{{"description_id", p.description_id},
                {"chosen", p.chosen_ref},
                {"rejected", p.rejected_ref},
                {"provenance", to_string(p.provenance)},
                {"annotator_id", p.annotator_id}};
}

PreferencePair pair_from_json(const Json& j) {
    PreferencePair p;
    p.description_id = j.at("description_id").get<std::string>();
    p.chosen_ref = j.at("chosen").get<std::string>();
    p.rejected_ref = j.at("rejected").get<std::string>();
    p.provenance = parse_provenance(j.at("provenance").get<std::string>());
    p.annotator_id = j.value("annotator_id", "");
    return p;
}

}  // namespace

CorpusStore::CorpusStore() = default;

CorpusStore::CorpusStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(*root_ / "blobs");
    replay();
    manifest_.emplace(*root_ / "manifest.jsonl");
}

void CorpusStore::replay() {
    for (const auto& entry : fs::recursive_directory_iterator(*root_ / "blobs")) {
        if (entry.is_regular_file() && entry.path().extension().empty()) {
            blob_hashes_.insert(entry.path().filename().string());
        }
    }
    const auto manifest = *root_ / "manifest.jsonl";
    if (!fs::exists(manifest)) return;
    for (const auto& record : read_jsonl(manifest)) apply(record);
}

void CorpusStore::persist(const Json& record) {
    if (manifest_) manifest_->append(record);
}

std::string CorpusStore::next_id(std::string_view prefix, std::string_view content) {
    ++counter_;
    return std::string(prefix) + "-" + sha256_hex(content).substr(0, 12) + "-" + std::to_string(counter_);
}

fs::path CorpusStore::blob_path(const std::string& hash) const {
    return *root_ / "blobs" / hash.substr(0, 2) / hash;
}

void CorpusStore::apply(const Json& r) {
    const auto type = r.at("type").get<std::string>();
    if (r.contains("counter")) counter_ = std::max(counter_, r.at("counter").get<std::uint64_t>());
    if (type == "description") {
        UiDescription d{r.at("id").get<std::string>(), r.at("text").get<std::string>(),
                        parse_split(r.at("split").get<std::string>())};
        description_index_[d.id] = descriptions_.size();
        description_by_key_[normalize_text(d.text)] = d.id;
        descriptions_.push_back(std::move(d));
    } else if (type == "image") {
        image_owners_[r.at("hash").get<std::string>()].insert(r.at("description_id").get<std::string>());
    } else if (type == "batch") {
        GenerationBatch b;
        b.id = r.at("id").get<std::string>();
        b.description_id = r.at("description_id").get<std::string>();
        b.kind = parse_batch_kind(r.at("kind").get<std::string>());
        b.sampler_seed = r.at("seed").get<std::uint64_t>();
        batch_order_.push_back(b.id);
        batches_.emplace(b.id, std::move(b));
    } else if (type == "candidate") {
        UiCandidate c;
        c.id = r.at("id").get<std::string>();
        c.batch_id = r.at("batch_id").get<std::string>();
        c.description_id = r.at("description_id").get<std::string>();
        c.batch_index = r.at("batch_index").get<int>();
        c.html_ref = r.at("html_ref").get<std::string>();
        batches_.at(c.batch_id).candidate_ids.push_back(c.id);
        candidates_.emplace(c.id, std::move(c));
    } else if (type == "render") {
        auto& c = candidate_mut(r.at("id").get<std::string>());
        c.screenshot_ref = r.at("screenshot").get<std::string>();
        c.geometry_ref = r.at("geometry").get<std::string>();
        image_owners_[*c.screenshot_ref].insert(c.description_id);
    } else if (type == "sketch") {
        candidate_mut(r.at("id").get<std::string>()).sketch_ref = r.at("sketch").get<std::string>();
    } else if (type == "score") {
        candidate_mut(r.at("id").get<std::string>()).score = r.at("score").get<double>();
    } else if (type == "retained") {
        batches_.at(r.at("batch_id").get<std::string>()).retained_ids =
            r.at("ids").get<std::vector<std::string>>();
    } else if (type == "preference") {
        preferences_.add(pair_from_json(r.at("pair")));
    } else if (type == "journal") {
        journals_[r.at("channel").get<std::string>()].push_back(r.at("record"));
    } else {
        throw Error(ErrorKind::kIntegrity, "unknown manifest record type '" + type + "'");
    }
}

UiCandidate& CorpusStore::candidate_mut(const std::string& id) {
    auto it = candidates_.find(id);
    if (it == candidates_.end()) throw Error(ErrorKind::kNotFound, "unknown candidate '" + id + "'");
    return it->second;
}

// Descriptions ---------------------------------------------------------------

std::string CorpusStore::add_description(std::string_view text, Split split) {
    const auto key = normalize_text(text);
    if (key.empty()) throw ValidationError("text", "description text is empty");
    std::unique_lock lock(mutex_);
    if (description_by_key_.count(key)) {
        throw ValidationError("text", "duplicate description '" + std::string(text) + "'");
    }
    const auto id = next_id("d", key);
    Json r{{"type", "description"}, {"id", id}, {"text", text}, {"split", to_string(split)},
           {"counter", counter_}};
    persist(r);
    apply(r);
    return id;
}

UiDescription CorpusStore::description(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = description_index_.find(id);
    if (it == description_index_.end()) throw Error(ErrorKind::kNotFound, "unknown description '" + id + "'");
    return descriptions_[it->second];
}

bool CorpusStore::has_description(const std::string& id) const {
    std::shared_lock lock(mutex_);
    return description_index_.count(id) > 0;
}

std::optional<std::string> CorpusStore::find_description(std::string_view text) const {
    std::shared_lock lock(mutex_);
    auto it = description_by_key_.find(normalize_text(text));
    if (it == description_by_key_.end()) return std::nullopt;
    return it->second;
}

std::vector<UiDescription> CorpusStore::descriptions() const {
    std::shared_lock lock(mutex_);
    return descriptions_;
}

// Blobs ----------------------------------------------------------------------

std::string CorpusStore::put_blob(std::string_view bytes) {
    auto hash = sha256_hex(bytes);
    std::unique_lock lock(mutex_);
    if (blob_hashes_.count(hash)) return hash;
    if (root_) {
        const auto path = blob_path(hash);
        fs::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
            out.flush();
            if (!out) throw Error(ErrorKind::kIo, "blob write failed: " + tmp.string());
        }
        fs::rename(tmp, path);
    } else {
        memory_blobs_.emplace(hash, std::string(bytes));
    }
    blob_hashes_.insert(hash);
    return hash;
}

std::string CorpusStore::blob(const std::string& hash) const {
    std::shared_lock lock(mutex_);
    if (!blob_hashes_.count(hash)) throw Error(ErrorKind::kNotFound, "unknown blob '" + hash + "'");
    if (!root_) return memory_blobs_.at(hash);
    return read_text_file(blob_path(hash));
}

bool CorpusStore::has_blob(const std::string& hash) const {
    std::shared_lock lock(mutex_);
    return blob_hashes_.count(hash) > 0;
}

std::size_t CorpusStore::blob_count() const {
    std::shared_lock lock(mutex_);
    return blob_hashes_.size();
}

std::string CorpusStore::put_image(const std::string& description_id, std::string_view png_bytes) {
    if (!has_description(description_id)) {
        throw Error(ErrorKind::kNotFound, "unknown description '" + description_id + "'");
    }
    auto hash = put_blob(png_bytes);
    std::unique_lock lock(mutex_);
    auto it = image_owners_.find(hash);
    if (it != image_owners_.end() && it->second.count(description_id)) return hash;
    Json r{{"type", "image"}, {"hash", hash}, {"description_id", description_id}};
    persist(r);
    apply(r);
    return hash;
}

bool CorpusStore::image_belongs_to(const std::string& hash, const std::string& description_id) const {
    std::shared_lock lock(mutex_);
    auto it = image_owners_.find(hash);
    return it != image_owners_.end() && it->second.count(description_id) > 0;
}

// Batches and candidates -----------------------------------------------------

std::string CorpusStore::begin_batch(const std::string& description_id, std::uint64_t sampler_seed,
                                     BatchKind kind) {
    std::unique_lock lock(mutex_);
    if (!description_index_.count(description_id)) {
        throw Error(ErrorKind::kNotFound, "unknown description '" + description_id + "'");
    }
    const auto id = next_id("b", description_id + ":" + std::to_string(sampler_seed));
    Json r{{"type", "batch"}, {"id", id}, {"description_id", description_id},
           {"kind", to_string(kind)}, {"seed", sampler_seed}, {"counter", counter_}};
    persist(r);
    apply(r);
    return id;
}

std::string CorpusStore::put_candidate(const std::string& batch_id, std::string_view html) {
    if (html.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ValidationError("html", "candidate markup is empty");
    }
    {
        std::shared_lock lock(mutex_);
        if (!batches_.count(batch_id)) throw Error(ErrorKind::kNotFound, "unknown batch '" + batch_id + "'");
    }
    const auto html_ref = put_blob(html);
    std::unique_lock lock(mutex_);
    const auto& batch = batches_.at(batch_id);
    const auto id = next_id("c", html_ref);
    Json r{{"type", "candidate"}, {"id", id}, {"batch_id", batch_id},
           {"description_id", batch.description_id},
           {"batch_index", static_cast<int>(batch.candidate_ids.size())},
           {"html_ref", html_ref}, {"counter", counter_}};
    persist(r);
    apply(r);
    return id;
}

void CorpusStore::set_render(const std::string& candidate_id, const std::string& screenshot_ref,
                             const std::string& geometry_ref) {
    std::unique_lock lock(mutex_);
    candidate_mut(candidate_id);
    if (!blob_hashes_.count(screenshot_ref) || !blob_hashes_.count(geometry_ref)) {
        throw Error(ErrorKind::kIntegrity, "render artifacts for '" + candidate_id + "' are not stored");
    }
    Json r{{"type", "render"}, {"id", candidate_id}, {"screenshot", screenshot_ref}, {"geometry", geometry_ref}};
    persist(r);
    apply(r);
}

void CorpusStore::set_sketch(const std::string& candidate_id, const std::string& sketch_ref) {
    std::unique_lock lock(mutex_);
    candidate_mut(candidate_id);
    if (!blob_hashes_.count(sketch_ref)) {
        throw Error(ErrorKind::kIntegrity, "sketch document for '" + candidate_id + "' is not stored");
    }
    Json r{{"type", "sketch"}, {"id", candidate_id}, {"sketch", sketch_ref}};
    persist(r);
    apply(r);
}

void CorpusStore::set_score(const std::string& candidate_id, double score) {
    if (!std::isfinite(score)) throw NumericError("candidate score must be finite");
    std::unique_lock lock(mutex_);
    candidate_mut(candidate_id);
    Json r{{"type", "score"}, {"id", candidate_id}, {"score", score}};
    persist(r);
    apply(r);
}

void CorpusStore::set_retained(const std::string& batch_id, std::vector<std::string> retained_ids) {
    std::unique_lock lock(mutex_);
    auto it = batches_.find(batch_id);
    if (it == batches_.end()) throw Error(ErrorKind::kNotFound, "unknown batch '" + batch_id + "'");
    const auto& ids = it->second.candidate_ids;
    for (const auto& id : retained_ids) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
            throw Error(ErrorKind::kIntegrity, "retained id '" + id + "' is not in batch '" + batch_id + "'");
        }
    }
    Json r{{"type", "retained"}, {"batch_id", batch_id}, {"ids", retained_ids}};
    persist(r);
    apply(r);
}

UiCandidate CorpusStore::candidate(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = candidates_.find(id);
    if (it == candidates_.end()) throw Error(ErrorKind::kNotFound, "unknown candidate '" + id + "'");
    return it->second;
}

bool CorpusStore::has_candidate(const std::string& id) const {
    std::shared_lock lock(mutex_);
    return candidates_.count(id) > 0;
}

std::string CorpusStore::candidate_html(const std::string& id) const { return blob(candidate(id).html_ref); }

GenerationBatch CorpusStore::batch(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = batches_.find(id);
    if (it == batches_.end()) throw Error(ErrorKind::kNotFound, "unknown batch '" + id + "'");
    return it->second;
}

std::vector<GenerationBatch> CorpusStore::batches() const {
    std::shared_lock lock(mutex_);
    std::vector<GenerationBatch> out;
    for (const auto& id : batch_order_) out.push_back(batches_.at(id));
    return out;
}

std::vector<GenerationBatch> CorpusStore::batches_for(const std::string& description_id) const {
    std::shared_lock lock(mutex_);
    std::vector<GenerationBatch> out;
    for (const auto& id : batch_order_) {
        const auto& b = batches_.at(id);
        if (b.description_id == description_id) out.push_back(b);
    }
    return out;
}

std::vector<UiCandidate> CorpusStore::retained_pool() const {
    std::shared_lock lock(mutex_);
    std::vector<UiCandidate> out;
    for (const auto& id : batch_order_) {
        const auto& b = batches_.at(id);
        if (b.kind != BatchKind::kGeneration) continue;
        for (const auto& cid : b.retained_ids) out.push_back(candidates_.at(cid));
    }
    return out;
}

// Preferences ----------------------------------------------------------------

bool CorpusStore::ref_resolves(const std::string& ref) const {
    return blob_hashes_.count(ref) > 0 || candidates_.count(ref) > 0;
}

bool CorpusStore::ref_belongs_to(const std::string& ref, const std::string& description_id) const {
    if (auto it = candidates_.find(ref); it != candidates_.end()) {
        return it->second.description_id == description_id;
    }
    auto it = image_owners_.find(ref);
    return it != image_owners_.end() && it->second.count(description_id) > 0;
}

void CorpusStore::check_pair(const PreferencePair& pair) const {
    std::shared_lock lock(mutex_);
    const auto name = "pair (" + pair.description_id + ", " + pair.chosen_ref + " > " + pair.rejected_ref + ")";
    if (!description_index_.count(pair.description_id)) {
        throw Error(ErrorKind::kIntegrity, name + ": description does not resolve");
    }
    if (pair.chosen_ref == pair.rejected_ref) {
        throw Error(ErrorKind::kIntegrity, name + ": chosen and rejected are identical");
    }
    for (const auto* ref : {&pair.chosen_ref, &pair.rejected_ref}) {
        if (!ref_resolves(*ref)) throw Error(ErrorKind::kIntegrity, name + ": dangling reference " + *ref);
        if (!ref_belongs_to(*ref, pair.description_id)) {
            throw Error(ErrorKind::kIntegrity, name + ": reference " + *ref + " belongs to another description");
        }
    }
}

void CorpusStore::add_preference(const PreferencePair& pair) {
    check_pair(pair);
    std::unique_lock lock(mutex_);
    Json r{{"type", "preference"}, {"pair", pair_to_json(pair)}};
    persist(r);
    apply(r);
}

PreferenceDataset CorpusStore::preferences() const {
    std::shared_lock lock(mutex_);
    return preferences_;
}

// Journals -------------------------------------------------------------------

void CorpusStore::append_journal(const std::string& channel, const Json& record) {
    std::unique_lock lock(mutex_);
    Json r{{"type", "journal"}, {"channel", channel}, {"record", record}};
    persist(r);
    apply(r);
}

std::vector<Json> CorpusStore::journal(const std::string& channel) const {
    std::shared_lock lock(mutex_);
    auto it = journals_.find(channel);
    return it == journals_.end() ? std::vector<Json>{} : it->second;
}

std::size_t CorpusStore::journal_size(const std::string& channel) const {
    std::shared_lock lock(mutex_);
    auto it = journals_.find(channel);
    return it == journals_.end() ? 0 : it->second.size();
}

}  // namespace uipref::corpus

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uipref::htmlkit {

struct Attribute {
    std::string name;   // lowercased
    std::string value;  // entity-decoded
    bool has_value = false;
    // Source span of the raw value (inside quotes when quoted). Empty span
    // positioned after the name when the attribute has no value.
    std::size_t value_begin = 0;
    std::size_t value_end = 0;
};

enum class NodeKind { kDocument, kElement, kText, kComment, kDoctype };

struct Node {
    NodeKind kind = NodeKind::kElement;
    std::string tag;  // lowercased, elements only
    std::vector<Attribute> attributes;
    std::string text;  // text and comment payloads
    std::size_t begin = 0;      // first byte of the outer markup
    std::size_t end = 0;        // one past the last byte of the outer markup
    std::size_t open_end = 0;   // one past the start tag's '>'
    int parent = -1;
    std::vector<int> children;
};

/// Error-tolerant HTML tree. Every element keeps the byte span of its outer
/// markup in the source, so fragments can be cut out verbatim.
///
/// Element identity is a structural path: `tag[i]` segments from the top,
/// where `i` counts element siblings under the same parent (0-based), e.g.
/// `html[0]/body[1]/div[0]`.
class Document {
public:
    static Document parse(std::string source);

    const std::string& source() const noexcept { return source_; }
    const Node& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    static constexpr int kDocumentNode = 0;

    /// Element node indices in document order.
    const std::vector<int>& elements() const noexcept { return elements_; }
    std::vector<int> element_children(int index) const;

    std::string path_of(int element) const;
    std::optional<int> resolve(std::string_view path) const;
    std::string_view outer_html(int element) const;

    const Attribute* attribute(int element, std::string_view name) const;
    std::string text_content(int element) const;
    int depth(int element) const;

    /// Recoveries performed while parsing (stray end tags, unclosed
    /// elements, unterminated constructs).
    std::size_t warnings() const noexcept { return warnings_; }

private:
    std::string source_;
    std::vector<Node> nodes_;
    std::vector<int> elements_;
    std::size_t warnings_ = 0;

    friend class TreeBuilder;
};

bool is_void_element(std::string_view tag);
std::string decode_entities(std::string_view text);

/// Parses "a[0]/b[2]" into (tag, index) segments; nullopt when malformed.
std::optional<std::vector<std::pair<std::string, int>>> split_path(std::string_view path);

/// Document-order comparison of two structural paths (ancestors first).
int compare_paths(std::string_view a, std::string_view b);

}  // namespace uipref::htmlkit

#include "uipref/htmlkit/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace uipref::htmlkit {

namespace {

constexpr std::array<std::string_view, 14> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 5> kRawTextElements = {"script", "style", "textarea", "title", "xmp"};

// Elements whose end tag may be omitted; closing them implicitly is not a
// parse recovery worth counting.
constexpr std::array<std::string_view, 14> kOptionalEnd = {
    "html", "body", "head", "p", "li", "dt", "dd", "option", "tr", "td", "th", "thead", "tbody", "tfoot"};

constexpr std::array<std::string_view, 24> kClosesParagraph = {
    "address", "article", "aside", "blockquote", "div", "dl", "fieldset", "footer",
    "form", "h1", "h2", "h3", "h4", "h5", "h6", "header",
    "hr", "main", "nav", "ol", "p", "section", "table", "ul"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& set, std::string_view s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return !std::isspace(u) && c != '/' && c != '>' && c != '<' && c != '=' && c != '"' && c != '\'';
}

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0x10FFFF) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

bool is_void_element(std::string_view tag) { return in(kVoidElements, tag); }

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '&') {
            out.push_back(text[i]);
            continue;
        }
        const auto semi = text.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back('&');
            continue;
        }
        const auto name = text.substr(i + 1, semi - i - 1);
        bool ok = true;
        if (name == "amp") out.push_back('&');
        else if (name == "lt") out.push_back('<');
        else if (name == "gt") out.push_back('>');
        else if (name == "quot") out.push_back('"');
        else if (name == "apos") out.push_back('\'');
        else if (name == "nbsp") append_utf8(out, 0xA0);
        else if (name.size() > 1 && name[0] == '#') {
            unsigned long cp = 0;
            const bool hex = name[1] == 'x' || name[1] == 'X';
            const auto digits = name.substr(hex ? 2 : 1);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            ok = ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty();
            if (ok) append_utf8(out, cp);
        } else {
            ok = false;
        }
        if (ok) {
            i = semi;
        } else {
            out.push_back('&');
        }
    }
    return out;
}

class TreeBuilder {
public:
    explicit TreeBuilder(Document& doc) : doc_(doc), src_(doc.source_) {}

    void run() {
        Node root;
        root.kind = NodeKind::kDocument;
        root.begin = 0;
        root.end = src_.size();
        doc_.nodes_.push_back(std::move(root));
        stack_.push_back(Document::kDocumentNode);

        std::size_t pos = 0;
        while (pos < src_.size()) {
            const auto lt = src_.find('<', pos);
            if (lt == std::string::npos) {
                add_text(pos, src_.size());
                break;
            }
            if (lt > pos) add_text(pos, lt);
            pos = consume_markup(lt);
        }
        while (stack_.size() > 1) {
            const int top = stack_.back();
            if (!in(kOptionalEnd, doc_.nodes_[top].tag)) ++doc_.warnings_;
            close(top, src_.size());
        }
    }

private:
    int current() const { return stack_.back(); }

    int add_node(Node node) {
        node.parent = current();
        const int index = static_cast<int>(doc_.nodes_.size());
        doc_.nodes_[node.parent].children.push_back(index);
        doc_.nodes_.push_back(std::move(node));
        return index;
    }

    void add_text(std::size_t begin, std::size_t end) {
        Node n;
        n.kind = NodeKind::kText;
        n.begin = begin;
        n.end = end;
        n.open_end = end;
        n.text = decode_entities(std::string_view(src_).substr(begin, end - begin));
        add_node(std::move(n));
    }

    void close(int index, std::size_t end) {
        doc_.nodes_[index].end = end;
        stack_.pop_back();
    }

    std::size_t consume_markup(std::size_t lt) {
        const std::string_view rest = std::string_view(src_).substr(lt);
        if (rest.rfind("<!--", 0) == 0) {
            auto close_at = src_.find("-->", lt + 4);
            std::size_t end;
            if (close_at == std::string::npos) {
                ++doc_.warnings_;
                end = src_.size();
                close_at = end;
            } else {
                end = close_at + 3;
            }
            Node n;
            n.kind = NodeKind::kComment;
            n.begin = lt;
            n.end = end;
            n.open_end = end;
            n.text = src_.substr(lt + 4, close_at - (lt + 4));
            add_node(std::move(n));
            return end;
        }
        if (rest.size() >= 2 && (rest[1] == '!' || rest[1] == '?')) {
            auto gt = src_.find('>', lt);
            const auto end = gt == std::string::npos ? src_.size() : gt + 1;
            if (gt == std::string::npos) ++doc_.warnings_;
            Node n;
            n.kind = NodeKind::kDoctype;
            n.begin = lt;
            n.end = end;
            n.open_end = end;
            n.text = src_.substr(lt, end - lt);
            add_node(std::move(n));
            return end;
        }
        if (rest.size() >= 3 && rest[1] == '/' && std::isalpha(static_cast<unsigned char>(rest[2]))) {
            return consume_end_tag(lt);
        }
        if (rest.size() >= 2 && std::isalpha(static_cast<unsigned char>(rest[1]))) {
            return consume_start_tag(lt);
        }
        // A lone '<' is literal text.
        add_text(lt, lt + 1);
        return lt + 1;
    }

    std::size_t consume_end_tag(std::size_t lt) {
        std::size_t p = lt + 2;
        const auto name_begin = p;
        while (p < src_.size() && is_name_char(src_[p])) ++p;
        const auto tag = lower(std::string_view(src_).substr(name_begin, p - name_begin));
        const auto gt = src_.find('>', p);
        const auto end = gt == std::string::npos ? src_.size() : gt + 1;
        if (gt == std::string::npos) ++doc_.warnings_;

        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
            if (*it != Document::kDocumentNode && doc_.nodes_[*it].tag == tag) {
                while (current() != *it) {
                    if (!in(kOptionalEnd, doc_.nodes_[current()].tag)) ++doc_.warnings_;
                    close(current(), lt);
                }
                close(*it, end);
                return end;
            }
        }
        ++doc_.warnings_;  // stray end tag, ignored
        return end;
    }

    void close_implied(const std::string& tag, std::size_t at) {
        auto top_tag = [&] { return doc_.nodes_[current()].tag; };
        if (tag == "li") {
            close_nearest("li", {"ul", "ol"}, at);
        } else if (tag == "dt" || tag == "dd") {
            if (top_tag() == "dt" || top_tag() == "dd") close(current(), at);
        } else if (tag == "option") {
            if (top_tag() == "option") close(current(), at);
        } else if (tag == "tr") {
            if (top_tag() == "td" || top_tag() == "th") close(current(), at);
            if (top_tag() == "tr") close(current(), at);
        } else if (tag == "td" || tag == "th") {
            if (top_tag() == "td" || top_tag() == "th") close(current(), at);
        }
        if (in(kClosesParagraph, tag) && top_tag() == "p") close(current(), at);
    }

    void close_nearest(std::string_view tag, std::initializer_list<std::string_view> scope, std::size_t at) {
        for (auto it = stack_.rbegin(); it != stack_.rend() && *it != Document::kDocumentNode; ++it) {
            const auto& t = doc_.nodes_[*it].tag;
            if (std::find(scope.begin(), scope.end(), t) != scope.end()) return;
            if (t == tag) {
                while (current() != *it) close(current(), at);
                close(*it, at);
                return;
            }
        }
    }

    std::size_t consume_start_tag(std::size_t lt) {
        std::size_t p = lt + 1;
        const auto name_begin = p;
        while (p < src_.size() && is_name_char(src_[p])) ++p;
        Node n;
        n.kind = NodeKind::kElement;
        n.tag = lower(std::string_view(src_).substr(name_begin, p - name_begin));
        n.begin = lt;
        bool self_closing = false;
        bool terminated = false;

        while (p < src_.size()) {
            while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p]))) ++p;
            if (p >= src_.size()) break;
            if (src_[p] == '>') {
                ++p;
                terminated = true;
                break;
            }
            if (src_[p] == '/') {
                ++p;
                if (p < src_.size() && src_[p] == '>') {
                    self_closing = true;
                    ++p;
                    terminated = true;
                    break;
                }
                continue;
            }
            if (src_[p] == '<') break;  // unterminated tag; let the next token start here
            Attribute attr;
            const auto an_begin = p;
            while (p < src_.size() && (is_name_char(src_[p]) || (p == an_begin && src_[p] == '='))) ++p;
            if (p == an_begin) {
                ++p;  // stray quote or similar
                continue;
            }
            attr.name = lower(std::string_view(src_).substr(an_begin, p - an_begin));
            auto q = p;
            while (q < src_.size() && std::isspace(static_cast<unsigned char>(src_[q]))) ++q;
            attr.value_begin = attr.value_end = p;
            if (q < src_.size() && src_[q] == '=') {
                ++q;
                while (q < src_.size() && std::isspace(static_cast<unsigned char>(src_[q]))) ++q;
                attr.has_value = true;
                if (q < src_.size() && (src_[q] == '"' || src_[q] == '\'')) {
                    const char quote = src_[q];
                    const auto close_q = src_.find(quote, q + 1);
                    attr.value_begin = q + 1;
                    if (close_q == std::string::npos) {
                        ++doc_.warnings_;
                        attr.value_end = src_.size();
                        p = src_.size();
                    } else {
                        attr.value_end = close_q;
                        p = close_q + 1;
                    }
                } else {
                    attr.value_begin = q;
                    while (q < src_.size() && !std::isspace(static_cast<unsigned char>(src_[q])) && src_[q] != '>') ++q;
                    attr.value_end = q;
                    p = q;
                }
                attr.value = decode_entities(
                    std::string_view(src_).substr(attr.value_begin, attr.value_end - attr.value_begin));
            }
            const bool duplicate = std::any_of(n.attributes.begin(), n.attributes.end(),
                                               [&](const Attribute& a) { return a.name == attr.name; });
            if (!duplicate) n.attributes.push_back(std::move(attr));
        }
        if (!terminated) ++doc_.warnings_;
        n.open_end = p;
        n.end = p;

        close_implied(n.tag, lt);
        const int index = add_node(std::move(n));
        doc_.elements_.push_back(index);
        const auto& tag = doc_.nodes_[index].tag;

        if (self_closing || is_void_element(tag)) return p;

        if (in(kRawTextElements, tag)) {
            const auto closing = "</" + tag;
            std::size_t search = p;
            std::size_t found = std::string::npos;
            while (true) {
                const auto cand = src_.find("</", search);
                if (cand == std::string::npos) break;
                if (lower(std::string_view(src_).substr(cand, closing.size())) == closing) {
                    found = cand;
                    break;
                }
                search = cand + 2;
            }
            const auto text_end = found == std::string::npos ? src_.size() : found;
            if (text_end > p) {
                stack_.push_back(index);
                Node t;
                t.kind = NodeKind::kText;
                t.begin = p;
                t.end = text_end;
                t.open_end = text_end;
                t.text = src_.substr(p, text_end - p);
                add_node(std::move(t));
                stack_.pop_back();
            }
            if (found == std::string::npos) {
                ++doc_.warnings_;
                doc_.nodes_[index].end = src_.size();
                return src_.size();
            }
            const auto gt = src_.find('>', found);
            const auto end = gt == std::string::npos ? src_.size() : gt + 1;
            doc_.nodes_[index].end = end;
            return end;
        }

        stack_.push_back(index);
        return p;
    }

    Document& doc_;
    const std::string& src_;
    std::vector<int> stack_;
};

Document Document::parse(std::string source) {
    Document doc;
    doc.source_ = std::move(source);
    TreeBuilder(doc).run();
    return doc;
}

std::vector<int> Document::element_children(int index) const {
    std::vector<int> out;
    for (int c : node(index).children) {
        if (nodes_[c].kind == NodeKind::kElement) out.push_back(c);
    }
    return out;
}

std::string Document::path_of(int element) const {
    std::vector<std::string> segments;
    for (int cur = element; cur != kDocumentNode && cur >= 0; cur = node(cur).parent) {
        const auto siblings = element_children(node(cur).parent);
        const auto pos = std::find(siblings.begin(), siblings.end(), cur) - siblings.begin();
        segments.push_back(node(cur).tag + "[" + std::to_string(pos) + "]");
    }
    std::string path;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        if (!path.empty()) path.push_back('/');
        path += *it;
    }
    return path;
}

std::optional<int> Document::resolve(std::string_view path) const {
    auto segments = split_path(path);
    if (!segments || segments->empty()) return std::nullopt;
    int cur = kDocumentNode;
    for (const auto& [tag, idx] : *segments) {
        const auto kids = element_children(cur);
        if (idx < 0 || static_cast<std::size_t>(idx) >= kids.size()) return std::nullopt;
        cur = kids[static_cast<std::size_t>(idx)];
        if (nodes_[cur].tag != tag) return std::nullopt;
    }
    return cur;
}

std::string_view Document::outer_html(int element) const {
    const auto& n = node(element);
    return std::string_view(source_).substr(n.begin, n.end - n.begin);
}

const Attribute* Document::attribute(int element, std::string_view name) const {
    for (const auto& a : node(element).attributes) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::string Document::text_content(int element) const {
    std::string out;
    std::vector<int> todo{element};
    while (!todo.empty()) {
        const int cur = todo.back();
        todo.pop_back();
        const auto& n = node(cur);
        if (n.kind == NodeKind::kText) out += n.text;
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) todo.push_back(*it);
    }
    return out;
}

int Document::depth(int element) const {
    int d = 0;
    for (int cur = node(element).parent; cur > kDocumentNode; cur = node(cur).parent) ++d;
    return d;
}

std::optional<std::vector<std::pair<std::string, int>>> split_path(std::string_view path) {
    std::vector<std::pair<std::string, int>> out;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        auto slash = path.find('/', pos);
        if (slash == std::string_view::npos) slash = path.size();
        const auto seg = path.substr(pos, slash - pos);
        const auto open = seg.find('[');
        if (open == std::string_view::npos || open == 0 || seg.back() != ']') return std::nullopt;
        int idx = 0;
        const auto digits = seg.substr(open + 1, seg.size() - open - 2);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) return std::nullopt;
        out.emplace_back(std::string(seg.substr(0, open)), idx);
        pos = slash + 1;
        if (slash == path.size()) break;
    }
    return out;
}

int compare_paths(std::string_view a, std::string_view b) {
    const auto sa = split_path(a);
    const auto sb = split_path(b);
    if (!sa || !sb) return a < b ? -1 : (a > b ? 1 : 0);
    const auto n = std::min(sa->size(), sb->size());
    for (std::size_t i = 0; i < n; ++i) {
        if ((*sa)[i].second != (*sb)[i].second) return (*sa)[i].second < (*sb)[i].second ? -1 : 1;
    }
    if (sa->size() != sb->size()) return sa->size() < sb->size() ? -1 : 1;
    return 0;
}

}  // namespace uipref::htmlkit

#include "evcorr/workflow_net.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

namespace evcorr {

namespace {

bool is_silent_label(const std::string& label, const ParseOptions& options) {
    return label.empty() || options.silent_labels.count(label) != 0;
}

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

struct RawArc {
    Arc arc;
    std::size_t line;
};

// Checks done by both parsers before the net is assembled.
WorkflowNet assemble(std::vector<std::string> places, std::vector<Transition> transitions, std::vector<RawArc> arcs) {
    std::set<std::string> place_ids(places.begin(), places.end());
    std::set<std::string> transition_ids;
    for (const auto& t : transitions) transition_ids.insert(t.id);
    std::set<std::string> all;
    for (const auto& id : places)
        if (!all.insert(id).second) throw ModelError("DUPLICATE_ID", "duplicate node id '" + id + "'");
    for (const auto& id : transition_ids)
        if (!all.insert(id).second) throw ModelError("DUPLICATE_ID", "duplicate node id '" + id + "'");
    if (transition_ids.size() != transitions.size()) {
        std::set<std::string> seen;
        for (const auto& t : transitions)
            if (!seen.insert(t.id).second) throw ModelError("DUPLICATE_ID", "duplicate node id '" + t.id + "'");
    }

    std::vector<Arc> flows;
    flows.reserve(arcs.size());
    for (auto& raw : arcs) {
        for (const auto* end : {&raw.arc.source, &raw.arc.target})
            if (!all.count(*end))
                throw ModelError("UNKNOWN_NODE", "arc references unknown node '" + *end + "'", raw.line);
        bool from_place = place_ids.count(raw.arc.source) != 0;
        bool to_place = place_ids.count(raw.arc.target) != 0;
        if (from_place == to_place)
            throw ModelError(std::string(diag::kBipartite),
                             "arc " + raw.arc.source + " -> " + raw.arc.target + " connects two " +
                                 (from_place ? "places" : "transitions"),
                             raw.line);
        flows.push_back(std::move(raw.arc));
    }
    return WorkflowNet(std::move(places), std::move(transitions), std::move(flows));
}

// --- PNML -----------------------------------------------------------------

class PnmlHandler {
public:
    explicit PnmlHandler(const ParseOptions& options, XML_Parser parser) : options_(options), parser_(parser) {}

    static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
        static_cast<PnmlHandler*>(self)->start(name, attrs);
    }
    static void on_end(void* self, const XML_Char* name) { static_cast<PnmlHandler*>(self)->end(name); }
    static void on_text(void* self, const XML_Char* s, int len) {
        static_cast<PnmlHandler*>(self)->text(std::string(s, static_cast<std::size_t>(len)));
    }

    bool saw_net() const { return net_count_ > 0; }

    WorkflowNet finish() {
        std::vector<Transition> transitions;
        for (auto& pending : transitions_) {
            Transition t;
            t.id = pending.id;
            t.label = trim(pending.label);
            t.is_silent = pending.invisible || is_silent_label(t.label, options_);
            transitions.push_back(std::move(t));
        }
        return assemble(std::move(places_), std::move(transitions), std::move(arcs_));
    }

private:
    struct PendingTransition {
        std::string id;
        std::string label;
        bool invisible = false;
    };

    static std::string local_name(const XML_Char* name) {
        std::string n(name);
        auto colon = n.rfind(':');
        return colon == std::string::npos ? n : n.substr(colon + 1);
    }

    static const char* attr(const XML_Char** attrs, const char* key) {
        for (int i = 0; attrs[i]; i += 2)
            if (std::string_view(attrs[i]) == key) return attrs[i + 1];
        return nullptr;
    }

    std::size_t line() const { return static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_)); }

    bool inside_first_net() const { return net_depth_ > 0 && net_count_ == 1; }

    std::string require_id(const XML_Char** attrs, const std::string& element) const {
        const char* id = attr(attrs, "id");
        if (!id || !*id) throw ModelError("MISSING_ID", "<" + element + "> without id", line());
        return id;
    }

    void start(const XML_Char* raw, const XML_Char** attrs) {
        std::string name = local_name(raw);
        stack_.push_back(name);
        if (name == "net") {
            ++net_count_;
            ++net_depth_;
            return;
        }
        if (!inside_first_net()) return;

        if (name == "place") {
            places_.push_back(require_id(attrs, name));
        } else if (name == "transition") {
            transitions_.push_back({require_id(attrs, name), {}, false});
            in_transition_ = true;
        } else if (name == "arc") {
            const char* s = attr(attrs, "source");
            const char* t = attr(attrs, "target");
            if (!s || !t) throw ModelError("MALFORMED_ARC", "<arc> without source/target", line());
            arcs_.push_back({{s, t}, line()});
        } else if (name == "toolspecific" && in_transition_) {
            for (int i = 0; attrs[i]; i += 2) {
                std::string key = attrs[i], value = attrs[i + 1];
                if (value == "$invisible$" || (key == "invisible" && value == "true"))
                    transitions_.back().invisible = true;
            }
        }
    }

    void end(const XML_Char* raw) {
        std::string name = local_name(raw);
        if (name == "net") --net_depth_;
        if (name == "transition") in_transition_ = false;
        stack_.pop_back();
    }

    void text(const std::string& s) {
        if (!inside_first_net() || !in_transition_ || stack_.size() < 3) return;
        const auto n = stack_.size();
        if (stack_[n - 1] == "text" && stack_[n - 2] == "name" && stack_[n - 3] == "transition")
            transitions_.back().label += s;
        if (stack_[n - 2] == "toolspecific" && trim(s) == "$invisible$") transitions_.back().invisible = true;
    }

    const ParseOptions& options_;
    XML_Parser parser_;
    std::vector<std::string> stack_;
    int net_count_ = 0;
    int net_depth_ = 0;
    bool in_transition_ = false;
    std::vector<std::string> places_;
    std::vector<PendingTransition> transitions_;
    std::vector<RawArc> arcs_;
};

// --- simple format -------------------------------------------------------

std::vector<std::string> tokenize(const std::string& line, std::size_t line_no) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            break;
        } else if (c == '"') {
            auto close = line.find('"', i + 1);
            if (close == std::string::npos) throw ModelError("SYNTAX", "unterminated quote", line_no);
            out.push_back(line.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            auto j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
            out.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return out;
}

}  // namespace

WorkflowNet parse_pnml(std::string_view text, const ParseOptions& options) {
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                           &XML_ParserFree);
    PnmlHandler handler(options, parser.get());
    XML_SetUserData(parser.get(), &handler);
    XML_SetElementHandler(parser.get(), &PnmlHandler::on_start, &PnmlHandler::on_end);
    XML_SetCharacterDataHandler(parser.get(), &PnmlHandler::on_text);
    if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), 1) == XML_STATUS_ERROR) {
        throw ModelError("MALFORMED_XML", XML_ErrorString(XML_GetErrorCode(parser.get())),
                         static_cast<std::size_t>(XML_GetCurrentLineNumber(parser.get())));
    }
    if (!handler.saw_net()) throw ModelError("NO_NET", "no net");
    return handler.finish();
}

WorkflowNet parse_simple_net(std::string_view text, const ParseOptions& options) {
    std::vector<std::string> places;
    std::vector<Transition> transitions;
    std::vector<RawArc> arcs;

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = tokenize(line, line_no);
        if (tok.empty()) continue;
        const auto& directive = tok[0];
        if (directive == "place") {
            if (tok.size() != 2) throw ModelError("SYNTAX", "expected: place <id>", line_no);
            places.push_back(tok[1]);
        } else if (directive == "transition") {
            if (tok.size() < 2 || tok.size() > 4) throw ModelError("SYNTAX", "expected: transition <id> [label] [silent]", line_no);
            bool flagged = tok.back() == "silent" && tok.size() >= 3;
            if (flagged) tok.pop_back();
            if (tok.size() > 3) throw ModelError("SYNTAX", "expected: transition <id> [label] [silent]", line_no);
            Transition t;
            t.id = tok[1];
            t.label = tok.size() == 3 ? tok[2] : tok[1];
            t.is_silent = flagged || is_silent_label(t.label, options);
            transitions.push_back(std::move(t));
        } else if (directive == "arc") {
            if (tok.size() != 3) throw ModelError("SYNTAX", "expected: arc <from> <to>", line_no);
            arcs.push_back({{tok[1], tok[2]}, line_no});
        } else {
            throw ModelError("UNKNOWN_DIRECTIVE", "unknown directive '" + directive + "'", line_no);
        }
    }
    if (places.empty() && transitions.empty()) throw ModelError("NO_NET", "no net");
    return assemble(std::move(places), std::move(transitions), std::move(arcs));
}

WorkflowNet load_net(const std::filesystem::path& path, const ParseOptions& options, std::optional<std::string> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("IO", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string fmt = format.value_or("");
    if (fmt.empty()) {
        auto ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        fmt = (ext == ".pnml" || ext == ".xml") ? "pnml" : "simple";
    }
    if (fmt == "pnml") return parse_pnml(buf.str(), options);
    if (fmt == "simple") return parse_simple_net(buf.str(), options);
    throw ModelError("FORMAT", "unknown model format '" + fmt + "'");
}

}  // namespace evcorr

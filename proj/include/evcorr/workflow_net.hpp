#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evcorr {

/// Thrown when a process model cannot be read or is structurally unusable.
class ModelError : public std::runtime_error {
public:
    ModelError(std::string code, const std::string& message, std::size_t line = 0);

    const std::string& code() const noexcept { return code_; }
    /// 1-based source line, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::string code_;
    std::size_t line_;
};

struct Transition {
    std::string id;
    std::string label;
    bool is_silent = false;
};

struct Arc {
    std::string source;
    std::string target;
};

/// A place/transition net with its flow relation. Node identity is by id;
/// labels of observable transitions are the activity names used downstream.
/// Immutable once built.
class WorkflowNet {
public:
    /// Throws ModelError on duplicate ids or arcs naming unknown nodes. Arcs
    /// that break bipartiteness are accepted here and reported by validate().
    WorkflowNet(std::vector<std::string> places, std::vector<Transition> transitions, std::vector<Arc> arcs);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    const std::vector<Arc>& arcs() const noexcept { return arcs_; }

    bool has_node(std::string_view id) const;
    bool is_place(std::string_view id) const;
    bool is_transition(std::string_view id) const;

    /// Throws ModelError if `id` is not a transition.
    const Transition& transition(std::string_view id) const;
    const Transition* find_observable(std::string_view label) const;

    /// Sorted ids of the nodes x with (x, node) in the flow relation.
    std::vector<std::string> preset(std::string_view node) const;
    /// Sorted ids of the nodes y with (node, y) in the flow relation.
    std::vector<std::string> postset(std::string_view node) const;

    /// Labels of non-silent transitions in declaration order.
    std::vector<std::string> observable_labels() const;

private:
    std::size_t index_of(std::string_view id) const;
    std::vector<std::string> names(const std::vector<std::size_t>& nodes) const;

    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    std::vector<Arc> arcs_;
    // Node index: places first, then transitions.
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> pre_;
    std::vector<std::vector<std::size_t>> post_;
};

struct NetIssue {
    std::string code;
    std::string node;
    std::string message;
};

struct NetDiagnostics {
    std::vector<NetIssue> errors;
    std::vector<NetIssue> warnings;

    bool ok() const noexcept { return errors.empty(); }
    bool has_error(std::string_view code) const;
};

struct ParseOptions {
    std::set<std::string, std::less<>> silent_labels{"tau"};
};

WorkflowNet parse_pnml(std::string_view text, const ParseOptions& options = {});

/// Line format: `place <id>`, `transition <id> [label] [silent]`, `arc <from> <to>`.
/// A transition without a label uses its id as label. `#` starts a comment;
/// tokens may be double-quoted.
WorkflowNet parse_simple_net(std::string_view text, const ParseOptions& options = {});

/// Picks the parser from the extension (`.pnml`/`.xml` vs anything else)
/// unless `format` is given as "pnml" or "simple".
WorkflowNet load_net(const std::filesystem::path& path, const ParseOptions& options = {},
                     std::optional<std::string> format = std::nullopt);

/// Structural checks only: bipartite flow, unique source and sink place,
/// every node on a source-to-sink path, unique observable labels. Deadlock
/// and livelock freedom are not checked.
NetDiagnostics validate(const WorkflowNet& net);

namespace diag {
inline constexpr std::string_view kBipartite = "BIPARTITE";
inline constexpr std::string_view kUniqueSource = "UNIQUE_SOURCE";
inline constexpr std::string_view kUniqueSink = "UNIQUE_SINK";
inline constexpr std::string_view kConnectivity = "CONNECTIVITY";
inline constexpr std::string_view kDuplicateLabel = "DUPLICATE_LABEL";
inline constexpr std::string_view kEmptyNet = "EMPTY_NET";
inline constexpr std::string_view kStartOnCycle = "START_ON_CYCLE";
}  // namespace diag

}  // namespace evcorr

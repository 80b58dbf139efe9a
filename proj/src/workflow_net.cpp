#include "evcorr/workflow_net.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace evcorr {

ModelError::ModelError(std::string code, const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      code_(std::move(code)),
      line_(line) {}

WorkflowNet::WorkflowNet(std::vector<std::string> places, std::vector<Transition> transitions, std::vector<Arc> arcs)
    : places_(std::move(places)), transitions_(std::move(transitions)), arcs_(std::move(arcs)) {
    auto add = [this](const std::string& id) {
        if (id.empty()) throw ModelError("EMPTY_ID", "node with empty id");
        if (!index_.emplace(id, index_.size()).second) throw ModelError("DUPLICATE_ID", "duplicate node id '" + id + "'");
    };
    for (const auto& p : places_) add(p);
    for (const auto& t : transitions_) add(t.id);

    pre_.resize(index_.size());
    post_.resize(index_.size());
    for (const auto& arc : arcs_) {
        auto s = index_.find(arc.source);
        auto t = index_.find(arc.target);
        if (s == index_.end() || t == index_.end()) {
            const auto& missing = s == index_.end() ? arc.source : arc.target;
            throw ModelError("UNKNOWN_NODE", "arc " + arc.source + " -> " + arc.target + " references unknown node '" +
                                                 missing + "'");
        }
        post_[s->second].push_back(t->second);
        pre_[t->second].push_back(s->second);
    }
    for (auto* adj : {&pre_, &post_})
        for (auto& v : *adj) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
}

std::size_t WorkflowNet::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw ModelError("UNKNOWN_NODE", "unknown node '" + std::string(id) + "'");
    return it->second;
}

bool WorkflowNet::has_node(std::string_view id) const { return index_.count(std::string(id)) != 0; }

bool WorkflowNet::is_place(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it != index_.end() && it->second < places_.size();
}

bool WorkflowNet::is_transition(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it != index_.end() && it->second >= places_.size();
}

const Transition& WorkflowNet::transition(std::string_view id) const {
    std::size_t i = index_of(id);
    if (i < places_.size()) throw ModelError("NOT_A_TRANSITION", "'" + std::string(id) + "' is a place");
    return transitions_[i - places_.size()];
}

const Transition* WorkflowNet::find_observable(std::string_view label) const {
    for (const auto& t : transitions_)
        if (!t.is_silent && t.label == label) return &t;
    return nullptr;
}

std::vector<std::string> WorkflowNet::names(const std::vector<std::size_t>& nodes) const {
    std::vector<std::string> out;
    out.reserve(nodes.size());
    for (auto n : nodes) out.push_back(n < places_.size() ? places_[n] : transitions_[n - places_.size()].id);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> WorkflowNet::preset(std::string_view node) const { return names(pre_[index_of(node)]); }

std::vector<std::string> WorkflowNet::postset(std::string_view node) const { return names(post_[index_of(node)]); }

std::vector<std::string> WorkflowNet::observable_labels() const {
    std::vector<std::string> out;
    for (const auto& t : transitions_)
        if (!t.is_silent) out.push_back(t.label);
    return out;
}

bool NetDiagnostics::has_error(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(), [&](const NetIssue& i) { return i.code == code; });
}

NetDiagnostics validate(const WorkflowNet& net) {
    NetDiagnostics d;
    auto error = [&](std::string_view code, const std::string& node, std::string msg) {
        d.errors.push_back({std::string(code), node, std::move(msg)});
    };

    if (net.places().empty() && net.transitions().empty()) {
        error(diag::kEmptyNet, "", "net has no nodes");
        return d;
    }

    for (const auto& arc : net.arcs()) {
        if (net.is_place(arc.source) == net.is_place(arc.target))
            error(diag::kBipartite, arc.source,
                  "arc " + arc.source + " -> " + arc.target + " connects two " +
                      (net.is_place(arc.source) ? "places" : "transitions"));
    }

    std::vector<std::string> sources, sinks;
    for (const auto& p : net.places()) {
        if (net.preset(p).empty()) sources.push_back(p);
        if (net.postset(p).empty()) sinks.push_back(p);
    }
    if (sources.size() != 1) {
        std::string list;
        for (const auto& s : sources) list += (list.empty() ? "" : ", ") + s;
        error(diag::kUniqueSource, sources.empty() ? "" : sources.front(),
              "expected exactly one source place, found " + std::to_string(sources.size()) +
                  (list.empty() ? "" : " (" + list + ")"));
    }
    if (sinks.size() != 1) {
        std::string list;
        for (const auto& s : sinks) list += (list.empty() ? "" : ", ") + s;
        error(diag::kUniqueSink, sinks.empty() ? "" : sinks.front(),
              "expected exactly one sink place, found " + std::to_string(sinks.size()) +
                  (list.empty() ? "" : " (" + list + ")"));
    }

    std::map<std::string, std::string> seen;
    for (const auto& t : net.transitions()) {
        if (t.is_silent) continue;
        auto [it, fresh] = seen.emplace(t.label, t.id);
        if (!fresh)
            error(diag::kDuplicateLabel, t.id, "label '" + t.label + "' is shared by " + it->second + " and " + t.id);
    }

    if (sources.size() == 1 && sinks.size() == 1) {
        auto reach = [&](const std::string& from, bool forward) {
            std::set<std::string> seen_nodes{from};
            std::deque<std::string> queue{from};
            while (!queue.empty()) {
                auto n = queue.front();
                queue.pop_front();
                for (auto& next : forward ? net.postset(n) : net.preset(n))
                    if (seen_nodes.insert(next).second) queue.push_back(next);
            }
            return seen_nodes;
        };
        auto fwd = reach(sources.front(), true);
        auto bwd = reach(sinks.front(), false);
        auto check = [&](const std::string& id) {
            if (!fwd.count(id) || !bwd.count(id))
                error(diag::kConnectivity, id,
                      "'" + id + "' is not on a path from " + sources.front() + " to " + sinks.front());
        };
        for (const auto& p : net.places()) check(p);
        for (const auto& t : net.transitions()) check(t.id);
    }
    return d;
}

}  // namespace evcorr

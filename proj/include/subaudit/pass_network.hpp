#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace subaudit {

/// Directed pass graph for one team in one slice; edge weight counts
/// completed passes passer -> receiver. Self-passes are ignored.
class PassGraph {
public:
    /// Returns the node index, adding the player if new.
    std::size_t add_player(const std::string& player_id);
    void add_pass(const std::string& from, const std::string& to, int count = 1);

    std::size_t size() const noexcept { return ids_.size(); }
    bool has_edges() const noexcept { return edge_count_ > 0; }
    const std::vector<std::string>& players() const noexcept { return ids_; }
    int weight(std::size_t from, std::size_t to) const;

private:
    std::vector<std::string> ids_;
    std::map<std::string, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, int> edges_;
    std::size_t edge_count_ = 0;
};

struct CentralityOptions {
    double teleport = 0.01;
    int max_iterations = 1000;
    double tolerance = 1e-10;
};

/// Eigenvector centrality with centrality flowing to pass receivers, computed
/// by power iteration on the teleport-augmented matrix and scaled so the most
/// central player has 1. A graph without edges scores everyone 0.
/// Throws NumericalError if the iteration does not settle.
std::map<std::string, double> network_score(const PassGraph& graph, const CentralityOptions& options = {});

}  // namespace subaudit

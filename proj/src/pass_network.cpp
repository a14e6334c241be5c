#include "subaudit/pass_network.hpp"

#include <algorithm>
#include <cmath>

#include "subaudit/error.hpp"

namespace subaudit {

std::size_t PassGraph::add_player(const std::string& player_id) {
    const auto [it, inserted] = index_.emplace(player_id, ids_.size());
    if (inserted) ids_.push_back(player_id);
    return it->second;
}

void PassGraph::add_pass(const std::string& from, const std::string& to, int count) {
    const std::size_t i = add_player(from);
    const std::size_t j = add_player(to);
    if (i == j || count <= 0) return;
    edges_[{i, j}] += count;
    edge_count_ += static_cast<std::size_t>(count);
}

int PassGraph::weight(std::size_t from, std::size_t to) const {
    const auto it = edges_.find({from, to});
    return it == edges_.end() ? 0 : it->second;
}

std::map<std::string, double> network_score(const PassGraph& graph, const CentralityOptions& options) {
    const std::size_t n = graph.size();
    std::map<std::string, double> scores;
    for (const auto& id : graph.players()) scores[id] = 0.0;
    if (n == 0 || !graph.has_edges()) return scores;

    // m[i*n+j]: passer i -> receiver j, plus uniform teleport.
    std::vector<double> m(n * n, options.teleport);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] += graph.weight(i, j);
    }

    // Iterate x <- x + M^T x / s. The shift keeps M^T's eigenvectors and makes
    // the Perron root strictly dominant even for two-player back-and-forth graphs.
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += m[i * n + j];
        scale = std::max(scale, col);
    }

    std::vector<double> x(n, 1.0);
    std::vector<double> y(n);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += m[i * n + j] * x[i];
            y[j] = x[j] + acc / scale;
        }
        const double peak = *std::max_element(y.begin(), y.end());
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            y[j] /= peak;
            delta = std::max(delta, std::abs(y[j] - x[j]));
        }
        x.swap(y);
        if (delta < options.tolerance) {
            for (std::size_t j = 0; j < n; ++j) scores[graph.players()[j]] = x[j];
            return scores;
        }
    }
    throw NumericalError("eigenvector centrality did not converge within " +
                         std::to_string(options.max_iterations) + " iterations");
}

}  // namespace subaudit

#include "uipref/arena/win_rate.hpp"

#include <algorithm>
#include <cstdio>

namespace uipref::arena {

namespace {

std::optional<std::size_t> index_of(const std::vector<std::string>& models, const std::string& m) {
    const auto it = std::lower_bound(models.begin(), models.end(), m);
    if (it == models.end() || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - models.begin());
}

}  // namespace

WinRateMatrix win_rate_matrix(std::span<const Battle> battles) {
    WinRateMatrix m;
    m.models = models_in(battles);
    const auto n = m.models.size();
    std::vector<std::vector<std::size_t>> wins(n, std::vector<std::size_t>(n, 0));
    m.games.assign(n, std::vector<std::size_t>(n, 0));
    for (const auto& b : battles) {
        const auto w = *index_of(m.models, b.winner_model());
        const auto l = *index_of(m.models, b.loser_model());
        ++wins[w][l];
        ++m.games[w][l];
        ++m.games[l][w];
    }
    m.rate.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && m.games[i][j] > 0) {
                m.rate[i][j] = static_cast<double>(wins[i][j]) / static_cast<double>(m.games[i][j]);
            }
        }
    }
    return m;
}

std::optional<double> WinRateMatrix::at(const std::string& a, const std::string& b) const {
    const auto i = index_of(models, a);
    const auto j = index_of(models, b);
    if (!i || !j) return std::nullopt;
    return rate[*i][*j];
}

std::optional<double> WinRateMatrix::average(const std::string& model) const {
    const auto i = index_of(models, model);
    if (!i) return std::nullopt;
    double sum = 0;
    std::size_t n = 0;
    for (const auto& cell : rate[*i]) {
        if (cell) {
            sum += *cell;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::string win_rate_csv(const WinRateMatrix& m) {
    std::string out = "model";
    for (const auto& name : m.models) out += "," + name;
    out += "\n";
    char buf[32];
    for (std::size_t i = 0; i < m.models.size(); ++i) {
        out += m.models[i];
        for (std::size_t j = 0; j < m.models.size(); ++j) {
            out += ",";
            if (m.rate[i][j]) {
                std::snprintf(buf, sizeof buf, "%.6f", *m.rate[i][j]);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace uipref::arena

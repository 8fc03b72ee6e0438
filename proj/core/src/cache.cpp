#include "ims/cache.hpp"
#include "ims/analytic_map.hpp"
#include "ims/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ims {

ResultCache::ResultCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // created on first store
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;  // corruption stays localized to its line
        double value = 0;
        try {
            value = std::stod(line.substr(tab + 1));
        } catch (const std::exception&) {
            continue;
        }
        entries_[line.substr(0, tab)] = value;
        ++file_lines_;
    }
}

std::string ResultCache::key(const std::string& map_id, double t, double r,
                             std::int64_t n_points) {
    return map_id + "|t=" + detail::format_double(t) + "|r=" + detail::format_double(r) +
           "|n=" + std::to_string(n_points);
}

std::optional<double> ResultCache::lookup(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResultCache::store(const std::string& key, double value) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, value);
    if (!inserted) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw EvaluationError("cannot append to cache file " + path_);
    out << key << '\t' << detail::format_double(value) << '\n';
    ++file_lines_;
}

std::size_t ResultCache::record_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return entries_.size();
}

std::size_t ResultCache::gc() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (path_.empty()) return 0;
    std::size_t dropped = file_lines_ > entries_.size() ? file_lines_ - entries_.size() : 0;
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw EvaluationError("cannot rewrite cache file " + path_);
    for (const auto& [k, v] : entries_)
        out << k << '\t' << detail::format_double(v) << '\n';
    file_lines_ = entries_.size();
    return dropped;
}

} // namespace ims

#ifndef IMS_CACHE_HPP
#define IMS_CACHE_HPP

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace ims {

// Persistent circle-integral cache. Append-only text file, one record per
// line: key <TAB> value. Values are decimals with 17 significant digits, so
// a re-read round-trips the stored double bit-exactly. Single writer, many
// readers; in-process access is serialized by a mutex.
class ResultCache {
public:
    ResultCache() = default;                      // in-memory only
    explicit ResultCache(std::string path);       // loads existing records

    static std::string key(const std::string& map_id, double t, double r,
                           std::int64_t n_points);

    std::optional<double> lookup(const std::string& key) const;
    void store(const std::string& key, double value);  // appends if file-backed

    std::size_t record_count() const;
    const std::string& path() const { return path_; }

    // Rewrites the backing file with one record per distinct key (last wins).
    // Returns the number of duplicate lines dropped.
    std::size_t gc();

private:
    mutable std::mutex mutex_;
    std::string path_;
    std::unordered_map<std::string, double> entries_;
    std::size_t file_lines_ = 0;
};

} // namespace ims

#endif

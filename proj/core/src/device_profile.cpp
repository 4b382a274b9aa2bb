#include "membench/device_profile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "membench/error.hpp"

namespace membench {

void DeviceProfile::validate() const {
    if (name.empty()) {
        throw ParameterError("device profile: name must be nonempty");
    }
    if (core_count < 1) {
        throw ParameterError("device profile '" + name + "': core_count must be >= 1");
    }
    if (levels.empty()) {
        throw ParameterError("device profile '" + name + "': at least one memory level (DRAM) required");
    }
    std::uint64_t prev = 0;
    for (const auto& level : levels) {
        if (level.name.empty() || level.name.find_first_of(",_\"\n\r") != std::string::npos) {
            throw ParameterError("device profile '" + name + "': level name '" + level.name +
                                 "' must be nonempty and free of ',', '_' and quotes");
        }
        if (level.capacity_bytes == 0) {
            throw ParameterError("device profile '" + name + "': level '" + level.name +
                                 "' capacity must be > 0");
        }
        if (level.capacity_bytes <= prev) {
            throw ParameterError("device profile '" + name + "': level capacities must be strictly "
                                 "increasing (violated at '" + level.name + "')");
        }
        prev = level.capacity_bytes;
    }
}

const MemoryLevel* DeviceProfile::next_faster(std::size_t index) const {
    if (index == 0 || index >= levels.size()) return nullptr;
    return &levels[index - 1];
}

const MemoryLevel& DeviceProfile::last_level() const {
    if (levels.empty()) throw ParameterError("device profile has no levels");
    return levels.back();
}

DeviceProfile parse_device_profile(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("device profile: invalid JSON: ") + e.what());
    }
    DeviceProfile profile;
    try {
        profile.name = doc.at("name").get<std::string>();
        profile.core_count = doc.at("core_count").get<int>();
        for (const auto& entry : doc.at("levels")) {
            MemoryLevel level;
            level.name = entry.at("name").get<std::string>();
            level.capacity_bytes = entry.at("capacity_bytes").get<std::uint64_t>();
            level.shared = entry.at("shared").get<bool>();
            profile.levels.push_back(std::move(level));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("device profile: missing or mistyped field: ") + e.what());
    }
    profile.validate();
    return profile;
}

DeviceProfile load_device_profile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("device profile: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_device_profile(buf.str());
}

std::string device_profile_to_json(const DeviceProfile& profile) {
    nlohmann::ordered_json doc;
    doc["name"] = profile.name;
    doc["core_count"] = profile.core_count;
    doc["levels"] = nlohmann::ordered_json::array();
    for (const auto& level : profile.levels) {
        doc["levels"].push_back({{"name", level.name},
                                 {"capacity_bytes", level.capacity_bytes},
                                 {"shared", level.shared}});
    }
    return doc.dump(2) + "\n";
}

std::size_t default_block_elems(const DeviceProfile& profile) {
    // Levels above the last one are caches; the fastest cache bounds the tile.
    std::uint64_t cache_bytes = 32 * 1024;
    if (profile.levels.size() >= 2) {
        cache_bytes = profile.levels.front().capacity_bytes;
    }
    const std::uint64_t budget = cache_bytes / 2;  // two resident blocks of doubles
    std::size_t blk = 1;
    while (2 * (blk * 2) * (blk * 2) * sizeof(double) <= budget) {
        blk *= 2;
    }
    return blk;
}

}  // namespace membench

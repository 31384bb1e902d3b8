#pragma once

#include <cstdint>
#include <string_view>

namespace popabm {

using AgentId = std::uint64_t;
using RegionId = std::int32_t;

enum class Sex : std::uint8_t { Male = 0, Female = 1 };

inline constexpr int kSexCount = 2;

constexpr int index_of(Sex s) { return static_cast<int>(s); }

// "m" / "f" as used in every CSV file.
constexpr std::string_view sex_code(Sex s) { return s == Sex::Male ? "m" : "f"; }

enum class InternalMigrationMode { None, FullRegional };

}  // namespace popabm

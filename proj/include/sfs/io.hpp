#pragma once

#include <json.hpp>

#include <filesystem>
#include <stdexcept>

#include "sfs/assign.hpp"
#include "sfs/flatten.hpp"
#include "sfs/taskmodel.hpp"

namespace sfs {

inline constexpr int kFormatVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const DagTask& dag);
nlohmann::json to_json(const TaskSet& set);
nlohmann::json to_json(const FlattenedSchedule& fs);
nlohmann::json to_json(const SystemPlan& plan);

// All parsers throw FormatError on malformed input or a format_version
// mismatch (a missing version is accepted).
DagTask dag_from_json(const nlohmann::json& j);
TaskSet taskset_from_json(const nlohmann::json& j);
FlattenedSchedule schedule_from_json(const nlohmann::json& j);
SystemPlan plan_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace sfs

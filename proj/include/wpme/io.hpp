#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wpme/diagnostics.hpp"
#include "wpme/solver.hpp"

namespace wpme::io {

// shortest round-trip decimal representation; keeps re-runs byte-identical
std::string fmt(double v);

// Records every file written under one output root and finishes with a
// MANIFEST listing them.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    void write_text(const std::string& rel, const std::string& content);
    void write_json(const std::string& rel, const nlohmann::json& j);
    void write_csv(const std::string& rel, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

    void write_trajectory_csv(const std::string& rel, const Trajectory& traj);
    void write_summary_csv(const std::string& rel, const std::vector<SummaryRow>& rows);

    void finalize(); // writes MANIFEST

    const std::vector<std::string>& files() const { return files_; }

private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
};

} // namespace wpme::io

#include "wpme/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace wpme::io {

std::string fmt(double v) {
    char buf[40];
    // %.17g round-trips; trim to the shortest representation that does
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

void OutputDir::write_text(const std::string& rel, const std::string& content) {
    const auto path = root_ / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << content;
    files_.push_back(rel);
}

void OutputDir::write_json(const std::string& rel, const nlohmann::json& j) {
    write_text(rel, j.dump(2) + "\n");
}

void OutputDir::write_csv(const std::string& rel, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) s += ',';
        s += header[i];
    }
    s += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += fmt(row[i]);
        }
        s += '\n';
    }
    write_text(rel, s);
}

void OutputDir::write_trajectory_csv(const std::string& rel, const Trajectory& traj) {
    std::string s = "t,x,u\n";
    for (const State& st : traj.states)
        for (int i = 0; i < traj.grid.size(); ++i) {
            s += fmt(st.t);
            s += ',';
            s += fmt(traj.grid.centers[i]);
            s += ',';
            s += fmt(st.u[i]);
            s += '\n';
        }
    write_text(rel, s);
}

void OutputDir::write_summary_csv(const std::string& rel, const std::vector<SummaryRow>& rows) {
    std::string s = "t,norm1,norm2,normq,normInf,mean,energy\n";
    for (const SummaryRow& r : rows) {
        s += fmt(r.t);
        s += ',';
        s += fmt(r.norm1);
        s += ',';
        s += fmt(r.norm2);
        s += ',';
        s += fmt(r.normq);
        s += ',';
        s += fmt(r.norm_inf);
        s += ',';
        s += fmt(r.mean);
        s += ',';
        s += fmt(r.energy);
        s += '\n';
    }
    write_text(rel, s);
}

void OutputDir::finalize() {
    std::vector<std::string> sorted = files_;
    std::sort(sorted.begin(), sorted.end());
    std::string s;
    for (const auto& f : sorted) {
        s += f;
        s += '\n';
    }
    const auto path = root_ / "MANIFEST";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write MANIFEST");
    f << s;
}

} // namespace wpme::io

#pragma once

// CSV / JSON emission with provenance headers and write-once output files.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#ifndef SCENERYWALK_VERSION
#define SCENERYWALK_VERSION "0.1.0"
#endif
#ifndef SCENERYWALK_GIT_REV
#define SCENERYWALK_GIT_REV "unknown"
#endif

namespace scenerywalk::io {

/// Raised when an output file already exists.
class OutputExistsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal string that round-trips to `v`; "NA" for NaN, "inf"/"-inf".
inline std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string provenance_string() { return std::string("scenerywalk-") + SCENERYWALK_VERSION + "+" + SCENERYWALK_GIT_REV; }

/// Run metadata carried by every output.
struct Provenance {
    std::uint64_t master_seed = 0;
    std::uint64_t replicas = 0;
    std::string command;

    std::string header_line() const {
        std::ostringstream os;
        os << "# " << provenance_string() << " command=" << command << " seed=" << master_seed << " replicas=" << replicas;
        return os.str();
    }

    nlohmann::json to_json() const {
        return {{"provenance", provenance_string()}, {"command", command}, {"seed", master_seed}, {"replicas", replicas}};
    }
};

/// Rows of string cells under a fixed header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) throw std::invalid_argument("CsvTable: row width differs from header");
        rows_.push_back(std::move(cells));
    }

    void add_footer(std::string line) { footer_.push_back(std::move(line)); }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    void write(std::ostream& os, const Provenance* prov = nullptr) const {
        if (prov) os << prov->header_line() << '\n';
        write_line(os, header_);
        for (const auto& r : rows_) write_line(os, r);
        for (const auto& f : footer_) os << "# " << f << '\n';
    }

    std::string str(const Provenance* prov = nullptr) const {
        std::ostringstream os;
        write(os, prov);
        return os.str();
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& r : rows_) {
            nlohmann::json o = nlohmann::json::object();
            for (std::size_t i = 0; i < header_.size(); ++i) o[header_[i]] = r[i];
            arr.push_back(std::move(o));
        }
        return arr;
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << quote(cells[i]);
        }
        os << '\n';
    }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> footer_;
};

/// JSON number, with non-finite values written as null.
inline nlohmann::json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

/// Deterministic serialization (sorted keys, fixed indentation).
inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Writes `content` to `path`, refusing to replace an existing file. "-" means stdout.
inline void write_once(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
    if (path.empty() || path == "-") {
        stdout_stream << content;
        return;
    }
    std::error_code ec;
    if (std::filesystem::exists(path, ec)) throw OutputExistsError("refusing to overwrite existing output " + path);
    std::ofstream out(path, std::ios::binary | std::ios::out);
    if (!out) throw std::runtime_error("cannot open output " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing output " + path);
}

}  // namespace scenerywalk::io

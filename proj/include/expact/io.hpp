#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "version.hpp"

namespace expact::io {

using ordered_json = nlohmann::ordered_json;

/// Fixed numeric formatting for all emitted files: 17 significant digits,
/// '.' decimal separator, shortest general form — so reruns diff cleanly and
/// round-trip to the same double.
inline std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // a negative zero prints the same as the zero it equals
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

/// Accumulates a CSV document in memory ('\n' line endings, no quoting —
/// cells are numbers, case names, or empty for singular points) for a single
/// atomic write.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text_ += ',';
            text_ += cells[i];
        }
        text_ += '\n';
    }

    const std::string& text() const noexcept { return text_; }

private:
    std::string text_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

/// Every emitted file pairs with a manifest describing how to reproduce it:
/// the command, the full effective parameter set, the tool version, and the
/// output paths. No timestamps or environment state — replaying a manifest
/// must give bit-identical bytes.
inline std::string manifest_path(const std::string& out_path) {
    return out_path + ".manifest.json";
}

inline ordered_json make_manifest(const std::string& command, const ordered_json& parameters,
                                  const std::vector<std::string>& outputs) {
    ordered_json m;
    m["command"] = command;
    m["version"] = version;
    m["parameters"] = parameters;
    m["outputs"] = outputs;
    return m;
}

inline void write_manifest(const ordered_json& manifest, const std::string& out_path) {
    write_file(manifest_path(out_path), manifest.dump(2) + "\n");
}

}  // namespace expact::io

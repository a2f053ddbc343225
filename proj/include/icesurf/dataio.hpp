#pragma once
/**
 * On-disk formats.
 *
 * Sequence container (a directory):
 *   manifest.txt   key = value lines: format, version, l, phi, rho, intensity_crc32
 *   intensity.bin  little-endian float32, slice-major then row-major within a
 *                  slice: element ((i * rho) + r) * phi + j
 *   air.csv        header "i,j,a", one row per (i, j)
 *   bins.csv       header "i,j,b", at most one row per slice
 *
 * Surface file: CSV with header "i,j,s", one row per (i, j).
 * Params file: sectioned key = value text with units in comments.
 * Evidence file: CSV with header "kind,i,j,lo,hi"; kind is "pin" (lo == hi) or "range".
 *
 * Every writer goes through write_file_atomic(): the file is either complete or absent.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "icesurf/core.hpp"
#include "icesurf/eval.hpp"
#include "icesurf/synth.hpp"

namespace icesurf::io {

inline constexpr int kContainerVersion = 1;
inline constexpr int kParamsVersion = 1;

/// Writes to a sibling temp file and renames it into place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

/// Whole-file read. Throws MissingFile if absent, IoError on read failure.
std::string read_file(const std::filesystem::path& path);

std::uint32_t crc32(std::string_view bytes);

void write_sequence(const TopoSequence& seq, const std::filesystem::path& dir);
/// Throws MissingFile, CorruptManifest, UnsupportedVersion, SizeMismatch, ChecksumMismatch or MalformedFile.
TopoSequence read_sequence(const std::filesystem::path& dir);

std::string format_surface(const Surface& surface);
Surface parse_surface(std::string_view text, const std::string& source = "surface");
void write_surface(const Surface& surface, const std::filesystem::path& path);
Surface read_surface(const std::filesystem::path& path);

std::string format_params(const EnergyParams& params);
EnergyParams parse_params(std::string_view text, const std::string& source = "params");
void write_params(const EnergyParams& params, const std::filesystem::path& path);
EnergyParams read_params(const std::filesystem::path& path);

ExtraEvidence parse_evidence(std::string_view text, const std::string& source = "evidence");
ExtraEvidence read_evidence(const std::filesystem::path& path);

/// Reads a synth config: optional "preset = easy|noisy|rough" followed by field overrides.
SynthConfig parse_synth_config(std::string_view text, const std::string& source = "config");
SynthConfig read_synth_config(const std::filesystem::path& path);

std::string report_json(const MetricsReport& report);

/**
 * Flat "key = value" document with optional [section] headers; keys inside a
 * section are stored as "section.key". '#' starts a comment.
 */
class KeyValueText {
public:
    static KeyValueText parse(std::string_view text, const std::string& source);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::string source_;
    std::map<std::string, std::string> values_;
};

}  // namespace icesurf::io

#include "icesurf/dataio.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <json.hpp>

namespace icesurf::io {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSequenceFormat = "icesurf-sequence";
constexpr const char* kParamsFormat = "icesurf-params";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && !s.empty();
}

long long to_int(std::string_view s, const std::string& source, std::size_t line) {
    long long v = 0;
    if (!parse_number(s, v)) {
        throw MalformedFile(source + ":" + std::to_string(line) + ": expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt_doubles(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += fmt_double(xs[k]);
    }
    return out + "]";
}

template <typename T>
std::vector<T> decode_le(std::string_view bytes) {
    static_assert(sizeof(T) == 4);
    std::vector<T> out(bytes.size() / 4);
    std::memcpy(out.data(), bytes.data(), out.size() * 4);
    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : out) {
            auto u = std::bit_cast<std::uint32_t>(v);
            u = __builtin_bswap32(u);
            v = std::bit_cast<T>(u);
        }
    }
    return out;
}

template <typename T>
std::string encode_le(const std::vector<T>& values) {
    static_assert(sizeof(T) == 4);
    std::string out(values.size() * 4, '\0');
    for (std::size_t k = 0; k < values.size(); ++k) {
        auto u = std::bit_cast<std::uint32_t>(values[k]);
        if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
        std::memcpy(out.data() + k * 4, &u, 4);
    }
    return out;
}

struct CsvTable {
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvTable parse_csv(std::string_view text, std::string_view header, const std::string& source) {
    CsvTable table;
    bool seen_header = false;
    std::size_t line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        if (!seen_header) {
            if (line != header) {
                throw MalformedFile(source + ": expected header '" + std::string(header) + "', got '" +
                                    std::string(line) + "'");
            }
            seen_header = true;
            continue;
        }
        table.rows.push_back(split(line, ','));
        table.line_numbers.push_back(line_no);
    }
    if (!seen_header) throw MalformedFile(source + ": missing header '" + std::string(header) + "'");
    return table;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view data) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
        os.write(data.data(), static_cast<std::streamsize>(data.size()));
        os.flush();
        if (!os) {
            os.close();
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) throw MissingFile("missing file: " + path.string());
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    if (is.bad()) throw IoError("read failed for " + path.string());
    return ss.str();
}

std::uint32_t crc32(std::string_view bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
        crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + offset), chunk);
        offset += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

// ---------------------------------------------------------------------------
// KeyValueText

KeyValueText KeyValueText::parse(std::string_view text, const std::string& source) {
    KeyValueText doc;
    doc.source_ = source;
    std::string section;
    std::size_t line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.find('=') == std::string_view::npos) {
            if (line.back() != ']') throw MalformedFile(source + ":" + std::to_string(line_no) + ": bad section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw MalformedFile(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw MalformedFile(source + ":" + std::to_string(line_no) + ": empty key");
        const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
        if (doc.values_.count(full)) {
            throw MalformedFile(source + ":" + std::to_string(line_no) + ": duplicate key '" + full + "'");
        }
        doc.values_[full] = std::string(trim(line.substr(eq + 1)));
    }
    return doc;
}

const std::string& KeyValueText::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw MalformedFile(source_ + ": missing key '" + key + "'");
    return it->second;
}

double KeyValueText::get_double(const std::string& key) const {
    double v = 0;
    if (!parse_number(get(key), v)) throw MalformedFile(source_ + ": '" + key + "' is not a number");
    return v;
}

long long KeyValueText::get_int(const std::string& key) const {
    long long v = 0;
    if (!parse_number(get(key), v)) throw MalformedFile(source_ + ": '" + key + "' is not an integer");
    return v;
}

std::uint64_t KeyValueText::get_u64(const std::string& key) const {
    std::uint64_t v = 0;
    std::string_view s = get(key);
    if (s.size() > 2 && (s.substr(0, 2) == "0x" || s.substr(0, 2) == "0X")) {
        s.remove_prefix(2);
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw MalformedFile(source_ + ": '" + key + "' is not a hex number");
        }
        return v;
    }
    if (!parse_number(s, v)) throw MalformedFile(source_ + ": '" + key + "' is not an unsigned integer");
    return v;
}

std::vector<double> KeyValueText::get_doubles(const std::string& key) const {
    std::string_view s = trim(get(key));
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw MalformedFile(source_ + ": '" + key + "' must be a [list]");
    }
    s = trim(s.substr(1, s.size() - 2));
    std::vector<double> out;
    if (s.empty()) return out;
    for (auto item : split(s, ',')) {
        double v = 0;
        if (!parse_number(item, v)) throw MalformedFile(source_ + ": bad number '" + std::string(item) + "' in " + key);
        out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sequence container

void write_sequence(const TopoSequence& seq, const fs::path& dir) {
    const Dims d = seq.dims();
    std::vector<float> file_order(d.voxels());
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            const auto col = seq.column(i, j);
            for (int r = 0; r < d.rho; ++r) {
                file_order[(static_cast<std::size_t>(i) * d.rho + r) * d.phi + j] = col[r];
            }
        }
    }
    const std::string intensity = encode_le(file_order);

    std::string air = "i,j,a\n";
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            air += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(seq.air(i, j)) + "\n";
        }
    }
    std::string bins = "i,j,b\n";
    for (int i = 0; i < d.l; ++i) {
        if (const auto& bin = seq.bin(i)) {
            bins += std::to_string(i) + "," + std::to_string(bin->column) + "," + std::to_string(bin->bound) + "\n";
        }
    }

    char crc[16];
    std::snprintf(crc, sizeof crc, "0x%08x", crc32(intensity));
    std::string manifest;
    manifest += "# topographic sequence container\n";
    manifest += "# intensity.bin: float32 little-endian, element ((i * rho) + r) * phi + j\n";
    manifest += std::string("format = ") + kSequenceFormat + "\n";
    manifest += "version = " + std::to_string(kContainerVersion) + "\n";
    manifest += "l = " + std::to_string(d.l) + "\n";
    manifest += "phi = " + std::to_string(d.phi) + "\n";
    manifest += "rho = " + std::to_string(d.rho) + "\n";
    manifest += "intensity_crc32 = " + std::string(crc) + "\n";

    write_file_atomic(dir / "intensity.bin", intensity);
    write_file_atomic(dir / "air.csv", air);
    write_file_atomic(dir / "bins.csv", bins);
    write_file_atomic(dir / "manifest.txt", manifest);
}

TopoSequence read_sequence(const fs::path& dir) {
    const fs::path manifest_path = dir / "manifest.txt";
    const std::string manifest_text = read_file(manifest_path);

    Dims d;
    std::uint32_t expected_crc = 0;
    try {
        const auto doc = KeyValueText::parse(manifest_text, manifest_path.string());
        if (doc.get("format") != kSequenceFormat) {
            throw CorruptManifest(manifest_path.string() + ": unknown format '" + doc.get("format") + "'");
        }
        if (!doc.has("version")) throw CorruptManifest(manifest_path.string() + ": missing version");
        const long long version = doc.get_int("version");
        if (version != kContainerVersion) {
            throw UnsupportedVersion(manifest_path.string() + ": container version " + std::to_string(version) +
                                     " is not supported (expected " + std::to_string(kContainerVersion) + ")");
        }
        d.l = static_cast<int>(doc.get_int("l"));
        d.phi = static_cast<int>(doc.get_int("phi"));
        d.rho = static_cast<int>(doc.get_int("rho"));
        const std::uint64_t crc = doc.get_u64("intensity_crc32");
        if (crc > 0xffffffffULL) throw CorruptManifest(manifest_path.string() + ": checksum out of range");
        expected_crc = static_cast<std::uint32_t>(crc);
    } catch (const MalformedFile& e) {
        throw CorruptManifest(e.what());
    }
    if (d.l < 1 || d.phi < 1 || d.rho < 1) throw CorruptManifest(manifest_path.string() + ": dimensions must be >= 1");

    const fs::path intensity_path = dir / "intensity.bin";
    const std::string raw = read_file(intensity_path);
    if (raw.size() != d.voxels() * 4) {
        throw SizeMismatch(intensity_path.string() + ": " + std::to_string(raw.size()) + " bytes, expected " +
                           std::to_string(d.voxels() * 4));
    }
    if (crc32(raw) != expected_crc) throw ChecksumMismatch(intensity_path.string() + ": checksum mismatch");
    const auto file_order = decode_le<float>(raw);
    std::vector<float> intensity(d.voxels());
    for (int i = 0; i < d.l; ++i) {
        for (int r = 0; r < d.rho; ++r) {
            for (int j = 0; j < d.phi; ++j) {
                intensity[d.column_index(i, j) * d.rho + r] =
                    file_order[(static_cast<std::size_t>(i) * d.rho + r) * d.phi + j];
            }
        }
    }

    const fs::path air_path = dir / "air.csv";
    const std::string air_text = read_file(air_path);
    const auto air_csv = parse_csv(air_text, "i,j,a", air_path.string());
    if (air_csv.rows.size() != d.columns()) {
        throw SizeMismatch(air_path.string() + ": " + std::to_string(air_csv.rows.size()) + " rows, expected " +
                           std::to_string(d.columns()));
    }
    std::vector<Label> air(d.columns());
    std::vector<bool> seen(d.columns(), false);
    for (std::size_t k = 0; k < air_csv.rows.size(); ++k) {
        const auto& row = air_csv.rows[k];
        const auto line = air_csv.line_numbers[k];
        if (row.size() != 3) throw MalformedFile(air_path.string() + ":" + std::to_string(line) + ": expected 3 fields");
        const auto i = to_int(row[0], air_path.string(), line);
        const auto j = to_int(row[1], air_path.string(), line);
        if (i < 0 || i >= d.l || j < 0 || j >= d.phi) {
            throw MalformedFile(air_path.string() + ":" + std::to_string(line) + ": index out of range");
        }
        const auto idx = d.column_index(static_cast<int>(i), static_cast<int>(j));
        if (seen[idx]) throw MalformedFile(air_path.string() + ":" + std::to_string(line) + ": duplicate entry");
        seen[idx] = true;
        air[idx] = static_cast<Label>(to_int(row[2], air_path.string(), line));
    }

    const fs::path bins_path = dir / "bins.csv";
    const std::string bins_text = read_file(bins_path);
    const auto bins_csv = parse_csv(bins_text, "i,j,b", bins_path.string());
    std::vector<std::optional<BottomBin>> bins(static_cast<std::size_t>(d.l));
    for (std::size_t k = 0; k < bins_csv.rows.size(); ++k) {
        const auto& row = bins_csv.rows[k];
        const auto line = bins_csv.line_numbers[k];
        if (row.size() != 3) throw MalformedFile(bins_path.string() + ":" + std::to_string(line) + ": expected 3 fields");
        const auto i = to_int(row[0], bins_path.string(), line);
        if (i < 0 || i >= d.l) throw MalformedFile(bins_path.string() + ":" + std::to_string(line) + ": bad slice index");
        if (bins[i]) throw MalformedFile(bins_path.string() + ":" + std::to_string(line) + ": second bin for slice");
        bins[i] = BottomBin{static_cast<int>(to_int(row[1], bins_path.string(), line)),
                            static_cast<Label>(to_int(row[2], bins_path.string(), line))};
    }
    return TopoSequence(d, std::move(intensity), std::move(air), std::move(bins));
}

// ---------------------------------------------------------------------------
// Surfaces

std::string format_surface(const Surface& surface) {
    std::string out = "i,j,s\n";
    for (int i = 0; i < surface.l(); ++i) {
        for (int j = 0; j < surface.phi(); ++j) {
            out += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(surface.at(i, j)) + "\n";
        }
    }
    return out;
}

Surface parse_surface(std::string_view text, const std::string& source) {
    const auto csv = parse_csv(text, "i,j,s", source);
    struct Entry {
        long long i, j, s;
        std::size_t line;
    };
    std::vector<Entry> entries;
    long long l = 0;
    long long phi = 0;
    for (std::size_t k = 0; k < csv.rows.size(); ++k) {
        const auto& row = csv.rows[k];
        const auto line = csv.line_numbers[k];
        if (row.size() != 3) throw MalformedFile(source + ":" + std::to_string(line) + ": expected 3 fields");
        Entry e{to_int(row[0], source, line), to_int(row[1], source, line), to_int(row[2], source, line), line};
        if (e.i < 0 || e.j < 0) throw MalformedFile(source + ":" + std::to_string(line) + ": negative index");
        l = std::max(l, e.i + 1);
        phi = std::max(phi, e.j + 1);
        entries.push_back(e);
    }
    if (entries.empty()) throw MalformedFile(source + ": no rows");
    if (static_cast<std::size_t>(l * phi) != entries.size()) {
        throw MalformedFile(source + ": " + std::to_string(entries.size()) + " rows do not cover a " +
                            std::to_string(l) + "x" + std::to_string(phi) + " grid");
    }
    Surface out(static_cast<int>(l), static_cast<int>(phi));
    std::vector<bool> seen(entries.size(), false);
    for (const auto& e : entries) {
        const auto idx = static_cast<std::size_t>(e.i * phi + e.j);
        if (seen[idx]) throw MalformedFile(source + ":" + std::to_string(e.line) + ": duplicate entry");
        seen[idx] = true;
        out.at(static_cast<int>(e.i), static_cast<int>(e.j)) = static_cast<Label>(e.s);
    }
    return out;
}

void write_surface(const Surface& surface, const fs::path& path) { write_file_atomic(path, format_surface(surface)); }

Surface read_surface(const fs::path& path) { return parse_surface(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Params

std::string format_params(const EnergyParams& p) {
    const auto mu = p.tmpl.mu();
    const auto sigma = p.tmpl.sigma();
    std::string out;
    out += "# energy parameters; lengths are in rows (range bins / pixels)\n";
    out += std::string("format = ") + kParamsFormat + "\n";
    out += "version = " + std::to_string(kParamsVersion) + "\n\n";
    out += "[template]\n";
    out += "length = " + std::to_string(p.tmpl.length()) + "    # pixels, centred on the boundary row\n";
    out += "mu = " + fmt_doubles({mu.begin(), mu.end()}) + "    # mean intensity per offset\n";
    out += "sigma = " + fmt_doubles({sigma.begin(), sigma.end()}) + "    # intensity variance per offset\n\n";
    out += "[air]\n";
    out += "tau = " + fmt_double(p.tau) + "    # rows below the air surface with a linear penalty\n\n";
    out += "[pairwise]\n";
    out += "alpha = " + std::to_string(p.alpha) + "    # rows; neighbours must differ by less than this\n";
    out += "sigma_hat = " + fmt_double(p.sigma_hat) + "    # rows; std of neighbour differences\n";
    out += "beta = " + fmt_doubles(p.beta) + "    # per-column smoothness weight, dimensionless\n";
    return out;
}

EnergyParams parse_params(std::string_view text, const std::string& source) {
    const auto doc = KeyValueText::parse(text, source);
    if (doc.has("format") && doc.get("format") != kParamsFormat) {
        throw MalformedFile(source + ": unknown format '" + doc.get("format") + "'");
    }
    if (doc.has("version") && doc.get_int("version") != kParamsVersion) {
        throw UnsupportedVersion(source + ": params version " + doc.get("version") + " is not supported");
    }
    EnergyParams p;
    auto mu = doc.get_doubles("template.mu");
    auto sigma = doc.get_doubles("template.sigma");
    if (doc.has("template.length") && doc.get_int("template.length") != static_cast<long long>(mu.size())) {
        throw MalformedFile(source + ": template.length disagrees with template.mu");
    }
    try {
        p.tmpl = TemplateModel(std::move(mu), std::move(sigma));
    } catch (const InvalidArgument& e) {
        throw MalformedFile(source + ": " + e.what());
    }
    p.tau = doc.has("air.tau") ? doc.get_double("air.tau") : kDefaultTau;
    p.alpha = static_cast<int>(doc.get_int("pairwise.alpha"));
    p.sigma_hat = doc.get_double("pairwise.sigma_hat");
    p.beta = doc.get_doubles("pairwise.beta");
    return p;
}

void write_params(const EnergyParams& params, const fs::path& path) { write_file_atomic(path, format_params(params)); }

EnergyParams read_params(const fs::path& path) { return parse_params(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Extra evidence

ExtraEvidence parse_evidence(std::string_view text, const std::string& source) {
    const auto csv = parse_csv(text, "kind,i,j,lo,hi", source);
    ExtraEvidence out;
    for (std::size_t k = 0; k < csv.rows.size(); ++k) {
        const auto& row = csv.rows[k];
        const auto line = csv.line_numbers[k];
        const std::string where = source + ":" + std::to_string(line);
        if (row.size() != 5) throw MalformedFile(where + ": expected 5 fields");
        const int i = static_cast<int>(to_int(row[1], source, line));
        const int j = static_cast<int>(to_int(row[2], source, line));
        const Label lo = static_cast<Label>(to_int(row[3], source, line));
        const Label hi = row[4].empty() ? lo : static_cast<Label>(to_int(row[4], source, line));
        if (row[0] == "pin") {
            if (lo != hi) throw MalformedFile(where + ": a pin needs lo == hi");
            out.pins.push_back(Pin{i, j, lo});
        } else if (row[0] == "range") {
            out.ranges.push_back(RangeConstraint{i, j, lo, hi});
        } else {
            throw MalformedFile(where + ": unknown kind '" + std::string(row[0]) + "'");
        }
    }
    return out;
}

ExtraEvidence read_evidence(const fs::path& path) { return parse_evidence(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Synth config

SynthConfig parse_synth_config(std::string_view text, const std::string& source) {
    const auto doc = KeyValueText::parse(text, source);
    SynthConfig cfg;
    if (doc.has("preset")) {
        const std::string& name = doc.get("preset");
        bool found = false;
        for (auto& [preset, c] : benchmark_suite(0)) {
            if (preset == name) {
                cfg = c;
                found = true;
            }
        }
        if (!found) throw MalformedFile(source + ": unknown preset '" + name + "'");
    }
    static const std::set<std::string> known{
        "preset",        "l",           "phi",           "rho",       "seed",          "noise_sigma",
        "harmonics",     "amplitude_min", "amplitude_max", "max_frequency", "rough_harmonics", "rough_amplitude",
        "rough_frequency", "tau",       "air_margin",    "air_amplitude", "bin_slack",   "alpha",
        "sigma_hat"};
    for (const auto& [key, value] : doc.values()) {
        if (!known.count(key)) throw MalformedFile(source + ": unknown key '" + key + "'");
    }
    auto set_int = [&](const char* key, int& field) {
        if (doc.has(key)) field = static_cast<int>(doc.get_int(key));
    };
    auto set_double = [&](const char* key, double& field) {
        if (doc.has(key)) field = doc.get_double(key);
    };
    set_int("l", cfg.dims.l);
    set_int("phi", cfg.dims.phi);
    set_int("rho", cfg.dims.rho);
    if (doc.has("seed")) cfg.seed = doc.get_u64("seed");
    set_double("noise_sigma", cfg.noise_sigma);
    set_int("harmonics", cfg.harmonics);
    set_double("amplitude_min", cfg.amplitude_min);
    set_double("amplitude_max", cfg.amplitude_max);
    set_int("max_frequency", cfg.max_frequency);
    set_int("rough_harmonics", cfg.rough_harmonics);
    set_double("rough_amplitude", cfg.rough_amplitude);
    set_int("rough_frequency", cfg.rough_frequency);
    set_double("tau", cfg.tau);
    set_int("air_margin", cfg.air_margin);
    set_double("air_amplitude", cfg.air_amplitude);
    set_int("bin_slack", cfg.bin_slack);
    set_int("alpha", cfg.alpha);
    set_double("sigma_hat", cfg.sigma_hat);
    return cfg;
}

SynthConfig read_synth_config(const fs::path& path) { return parse_synth_config(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Reports

std::string report_json(const MetricsReport& report) {
    using nlohmann::ordered_json;
    auto precision = [](const std::map<int, double>& m) {
        ordered_json out = ordered_json::object();
        for (const auto& [k, v] : m) out[std::to_string(k)] = v;
        return out;
    };
    ordered_json j;
    j["mean_error"] = report.mean_error;
    j["median_mean_error"] = report.median_mean_error;
    j["precision_at"] = precision(report.precision_at);
    ordered_json slices = ordered_json::array();
    for (std::size_t i = 0; i < report.per_slice.size(); ++i) {
        slices.push_back({{"slice", i},
                          {"mean_error", report.per_slice[i].mean_error},
                          {"precision_at", precision(report.per_slice[i].precision_at)}});
    }
    j["per_slice"] = std::move(slices);
    return j.dump(2) + "\n";
}

}  // namespace icesurf::io

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vmac/error.hpp"
#include "vmac/random.hpp"

namespace vmac {

enum class FrameType : char { I = 'I', P = 'P', B = 'B', Unknown = '-' };

enum class ContentClass { News, Sports, Movie, Demo, Unknown };

constexpr std::string_view to_string(ContentClass c) noexcept {
    switch (c) {
    case ContentClass::News: return "news";
    case ContentClass::Sports: return "sports";
    case ContentClass::Movie: return "movie";
    case ContentClass::Demo: return "demo";
    case ContentClass::Unknown: return "unknown";
    }
    return "unknown";
}

inline std::optional<ContentClass> parse_content_class(std::string_view s) {
    for (auto c : {ContentClass::News, ContentClass::Sports, ContentClass::Movie, ContentClass::Demo,
                   ContentClass::Unknown}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

constexpr FrameType frame_type_from_char(char c) noexcept {
    switch (c) {
    case 'I': case 'i': return FrameType::I;
    case 'P': case 'p': return FrameType::P;
    case 'B': case 'b': return FrameType::B;
    default: return FrameType::Unknown;
    }
}

struct FrameRecord {
    std::uint64_t index = 0;
    FrameType type = FrameType::Unknown;
    std::uint64_t size = 0; // bytes

    friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

/// An immutable frame-size sequence at a fixed frame rate.
///
/// Frame k occupies slot k and contributes size * 8 * fps bits/s for the
/// whole slot (rates are piecewise constant per frame).
class VideoTrace {
public:
    VideoTrace(std::string id, std::vector<FrameRecord> frames, double fps,
               ContentClass content = ContentClass::Unknown)
        : id_(std::move(id)), frames_(std::move(frames)), fps_(fps), content_(content) {
        if (frames_.empty()) throw Error(Errc::EmptyTrace, "trace '" + id_ + "' has no frames");
        if (!(fps_ > 0.0) || !std::isfinite(fps_))
            throw Error(Errc::InvalidArgument, "fps must be positive and finite");
        for (std::size_t k = 1; k < frames_.size(); ++k) {
            if (frames_[k].index <= frames_[k - 1].index)
                throw Error(Errc::InvalidArgument, "frame indices must be strictly increasing");
        }
    }

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const std::vector<FrameRecord>& frames() const noexcept { return frames_; }
    [[nodiscard]] std::size_t length() const noexcept { return frames_.size(); }
    [[nodiscard]] double fps() const noexcept { return fps_; }
    [[nodiscard]] ContentClass content_class() const noexcept { return content_; }

    /// Rate of frame k in bits/s.
    [[nodiscard]] double frame_rate_bps(std::size_t k) const noexcept {
        return static_cast<double>(frames_[k].size) * 8.0 * fps_;
    }

    friend bool operator==(const VideoTrace&, const VideoTrace&) = default;

private:
    std::string id_;
    std::vector<FrameRecord> frames_;
    double fps_;
    ContentClass content_;
};

using TracePtr = std::shared_ptr<const VideoTrace>;

/// One session: a trace replayed from a start offset, wrapping at the end.
struct FlowInstance {
    TracePtr trace;
    std::uint64_t start_offset = 0;
    int flow_id = 0;
};

/// Bytes `flow` emits in `slot`: frame (start_offset + slot) mod length.
inline std::uint64_t flow_bytes_at(const FlowInstance& flow, std::uint64_t slot) noexcept {
    const auto len = static_cast<std::uint64_t>(flow.trace->length());
    return flow.trace->frames()[static_cast<std::size_t>((flow.start_offset + slot) % len)].size;
}

/// Rate of `flow` at `slot` in bits/s.
inline double flow_rate_at(const FlowInstance& flow, std::uint64_t slot) noexcept {
    return static_cast<double>(flow_bytes_at(flow, slot)) * 8.0 * flow.trace->fps();
}

inline FlowInstance make_flow(TracePtr trace, std::uint64_t start_offset = 0, int flow_id = 0) {
    if (!trace) throw Error(Errc::InvalidArgument, "flow requires a trace");
    if (start_offset >= trace->length())
        throw Error(Errc::InvalidArgument, "start offset must be below the trace length");
    return FlowInstance{std::move(trace), start_offset, flow_id};
}

struct FlowRateBounds {
    double min_rate = 0.0; // bits/s
    double max_rate = 0.0; // bits/s

    [[nodiscard]] double width() const noexcept { return max_rate - min_rate; }
};

// ---------------------------------------------------------------------------
// Text format
//
//   # fps=25            frame rate directive (required unless overridden)
//   # class=sports      optional content class
//   # id=name           optional label
//   # anything else     comment
//   1200                one column: size in bytes, index = line order
//   0 I 1200            three columns: index, frame type, size in bytes
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<std::uint64_t> parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t b = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

} // namespace detail

inline VideoTrace parse_trace(std::istream& in, std::string id, std::optional<double> fps_override = {}) {
    std::optional<double> fps;
    ContentClass content = ContentClass::Unknown;
    std::vector<FrameRecord> frames;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        if (text.front() == '#') {
            const auto body = detail::trim(text.substr(1));
            if (body.starts_with("fps=")) {
                auto v = detail::parse_double(detail::trim(body.substr(4)));
                if (!v || !(*v > 0.0) || !std::isfinite(*v))
                    throw ParseError(Errc::MalformedLine, lineno, "bad fps directive '" + line + "'");
                fps = *v;
            } else if (body.starts_with("class=")) {
                auto c = parse_content_class(detail::trim(body.substr(6)));
                if (!c) throw ParseError(Errc::MalformedLine, lineno, "unknown content class '" + line + "'");
                content = *c;
            } else if (body.starts_with("id=")) {
                id = std::string(detail::trim(body.substr(3)));
            }
            continue;
        }

        const auto cols = detail::split_ws(text);
        FrameRecord rec;
        if (cols.size() == 1) {
            auto size = detail::parse_u64(cols[0]);
            if (!size) throw ParseError(Errc::MalformedLine, lineno, "non-numeric frame size '" + line + "'");
            rec.index = frames.empty() ? 0 : frames.back().index + 1;
            rec.size = *size;
        } else if (cols.size() == 3 && cols[1].size() == 1) {
            auto index = detail::parse_u64(cols[0]);
            auto size = detail::parse_u64(cols[2]);
            if (!index || !size)
                throw ParseError(Errc::MalformedLine, lineno, "non-numeric field in '" + line + "'");
            if (!frames.empty() && *index <= frames.back().index)
                throw ParseError(Errc::MalformedLine, lineno, "frame index not increasing");
            rec.index = *index;
            rec.type = frame_type_from_char(cols[1][0]);
            rec.size = *size;
        } else {
            throw ParseError(Errc::MalformedLine, lineno, "expected '<size>' or '<index> <type> <size>'");
        }
        frames.push_back(rec);
    }

    if (frames.empty()) throw Error(Errc::EmptyTrace, "trace '" + id + "' has no frames");
    if (!fps) fps = fps_override;
    if (!fps) throw Error(Errc::MissingFps, "trace '" + id + "' has no '# fps=' directive and no override");
    return VideoTrace(std::move(id), std::move(frames), *fps, content);
}

/// Parses a trace file. The in-file fps directive wins over `fps_override`.
inline VideoTrace parse_trace_file(const std::filesystem::path& path, std::optional<double> fps_override = {}) {
    if (fps_override && !(*fps_override > 0.0))
        throw Error(Errc::InvalidArgument, "fps override must be positive");
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open trace file " + path.string());
    return parse_trace(in, path.stem().string(), fps_override);
}

inline void write_trace(std::ostream& out, const VideoTrace& trace) {
    std::ostringstream fps;
    fps << std::setprecision(17) << trace.fps();
    out << "# id=" << trace.id() << '\n';
    out << "# fps=" << fps.str() << '\n';
    out << "# class=" << to_string(trace.content_class()) << '\n';
    for (const auto& f : trace.frames())
        out << f.index << ' ' << static_cast<char>(f.type) << ' ' << f.size << '\n';
}

inline void write_trace_file(const std::filesystem::path& path, const VideoTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write trace file " + path.string());
    write_trace(out, trace);
}

/// Loads every `*.trace` / `*.txt` file under `dir`, sorted by file name.
inline std::vector<TracePtr> load_trace_dir(const std::filesystem::path& dir,
                                            std::optional<double> fps_override = {}) {
    if (!std::filesystem::is_directory(dir))
        throw Error(Errc::Io, "trace directory not found: " + dir.string());
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension();
        if (ext == ".trace" || ext == ".txt") paths.push_back(e.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<TracePtr> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(std::make_shared<const VideoTrace>(parse_trace_file(p, fps_override)));
    if (out.empty()) throw Error(Errc::EmptyLibrary, "no trace files in " + dir.string());
    return out;
}

/// Trace whose per-slot rates are i.i.d. uniform on [min_rate, max_rate].
///
/// Rates are floored to whole bytes. For a non-degenerate interval the byte
/// size is clamped to the sizes representable inside it, so every slot rate
/// stays within the bounds. A degenerate interval yields a CBR trace at the
/// floored rate.
inline VideoTrace synth_bounded_trace(std::size_t length, const FlowRateBounds& bounds, double fps,
                                      std::uint64_t seed, std::string id = "bounded") {
    if (length == 0) throw Error(Errc::InvalidArgument, "length must be positive");
    if (!(fps > 0.0)) throw Error(Errc::InvalidArgument, "fps must be positive");
    if (!(bounds.min_rate >= 0.0) || !(bounds.max_rate >= bounds.min_rate))
        throw Error(Errc::InvalidArgument, "invalid rate bounds");

    const double bits_per_byte_slot = 8.0 * fps;
    const auto lo = static_cast<std::uint64_t>(std::ceil(bounds.min_rate / bits_per_byte_slot));
    const auto hi = static_cast<std::uint64_t>(std::floor(bounds.max_rate / bits_per_byte_slot));
    const bool degenerate = bounds.min_rate == bounds.max_rate;
    if (!degenerate && hi < lo)
        throw Error(Errc::BoundsTooTight, "no whole-byte frame size fits inside the rate bounds");

    Engine eng(seed);
    std::vector<FrameRecord> frames(length);
    for (std::size_t k = 0; k < length; ++k) {
        std::uint64_t size = hi;
        if (!degenerate) {
            const double rate = uniform_real(eng, bounds.min_rate, bounds.max_rate);
            size = std::clamp(static_cast<std::uint64_t>(std::floor(rate / bits_per_byte_slot)), lo, hi);
        }
        frames[k] = FrameRecord{k, FrameType::Unknown, size};
    }
    return VideoTrace(std::move(id), std::move(frames), fps);
}

} // namespace vmac

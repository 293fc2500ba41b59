#include "checkembed/heatmap.hpp"

#include "checkembed/error.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace checkembed {

namespace {

constexpr Rgb kLow{59, 76, 192};
constexpr Rgb kMid{255, 255, 255};
constexpr Rgb kHigh{180, 4, 38};

constexpr int kCell = 56;
constexpr int kMargin = 40;

Rgb mix(Rgb a, Rgb b, double f) {
    const auto ch = [f](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * f)); };
    return {ch(a.r, b.r), ch(a.g, b.g), ch(a.b, b.b)};
}

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_value(const std::string& text, std::size_t row) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw Error(ErrorCode::ParseError, "csv row " + std::to_string(row) + ": bad value '" + text + "'");
    }
    return v;
}

} // namespace

Rgb heat_color(double value) noexcept {
    const double v = std::clamp(value, -1.0, 1.0);
    return v < 0.0 ? mix(kMid, kLow, -v) : mix(kMid, kHigh, v);
}

std::string cell_text(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
}

std::string render_svg(const SimilarityMatrix& matrix) {
    const std::size_t n = matrix.order();
    const auto& labels = matrix.labels();
    const int side = kMargin + static_cast<int>(n) * kCell;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side + 8 << "\" height=\"" << side + 8
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        const int pos = kMargin + static_cast<int>(i) * kCell + kCell / 2;
        out << "<text x=\"" << pos << "\" y=\"" << kMargin - 8 << "\" text-anchor=\"middle\">" << labels[i]
            << "</text>\n";
        out << "<text x=\"" << kMargin - 8 << "\" y=\"" << pos << "\" text-anchor=\"end\" "
            << "dominant-baseline=\"middle\">" << labels[i] << "</text>\n";
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double v = matrix.at(r, c);
            const int x = kMargin + static_cast<int>(c) * kCell;
            const int y = kMargin + static_cast<int>(r) * kCell;
            out << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell
                << "\" height=\"" << kCell << "\" fill=\"" << hex(heat_color(v)) << "\"/>\n";
            out << "<text class=\"value\" x=\"" << x + kCell / 2 << "\" y=\"" << y + kCell / 2
                << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << cell_text(v) << "</text>\n";
        }
    }
    if (matrix.has_gt()) {
        const int at = kMargin + static_cast<int>(matrix.reply_count()) * kCell;
        out << "<line class=\"gt-rule\" x1=\"" << kMargin << "\" y1=\"" << at << "\" x2=\"" << side
            << "\" y2=\"" << at << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
        out << "<line class=\"gt-rule\" x1=\"" << at << "\" y1=\"" << kMargin << "\" x2=\"" << at
            << "\" y2=\"" << side << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_csv(const SimilarityMatrix& matrix) {
    std::string out;
    for (const auto& l : matrix.labels()) out += "," + l;
    out += "\n";
    char buf[40];
    for (std::size_t r = 0; r < matrix.order(); ++r) {
        out += matrix.labels()[r];
        for (std::size_t c = 0; c < matrix.order(); ++c) {
            std::snprintf(buf, sizeof buf, ",%.17g", matrix.at(r, c));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

SimilarityMatrix parse_csv(std::string_view csv, Measure measure) {
    std::vector<std::string> lines;
    for (auto& l : split(csv, '\n')) {
        if (!l.empty() && l.back() == '\r') l.pop_back();
        if (!l.empty()) lines.push_back(std::move(l));
    }
    if (lines.empty()) throw Error(ErrorCode::ParseError, "csv is empty");

    auto header = split(lines.front(), ',');
    if (header.size() < 2 || !header.front().empty()) {
        throw Error(ErrorCode::ParseError, "csv header must start with an empty cell");
    }
    header.erase(header.begin());
    const std::size_t n = header.size();
    if (lines.size() != n + 1) {
        throw Error(ErrorCode::ParseError, "csv has " + std::to_string(lines.size() - 1) + " rows for " +
                                               std::to_string(n) + " labels");
    }
    const bool has_gt = header.back() == kGroundTruthLabel;

    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto fields = split(lines[r + 1], ',');
        if (fields.size() != n + 1) {
            throw Error(ErrorCode::ParseError, "csv row " + std::to_string(r) + " has " +
                                                   std::to_string(fields.size() - 1) + " values");
        }
        if (fields.front() != header[r]) {
            throw Error(ErrorCode::ParseError, "csv row label '" + fields.front() + "' does not match header '" +
                                                   header[r] + "'");
        }
        for (std::size_t c = 1; c <= n; ++c) entries.push_back(parse_value(fields[c], r));
    }
    SimilarityMatrix m = [&] {
        try {
            return SimilarityMatrix(n, std::move(entries), has_gt, measure);
        } catch (const Error& e) {
            throw Error(ErrorCode::ParseError, "csv matrix: " + e.detail());
        }
    }();
    if (m.labels() != header) throw Error(ErrorCode::ParseError, "csv labels are not the expected sequence");
    return m;
}

} // namespace checkembed

#pragma once

#include "checkembed/scorematrix.hpp"

#include <string>
#include <string_view>

namespace checkembed {

struct Rgb {
    int r, g, b;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Diverging scale: -1 blue, 0 white, +1 red, linear in between.
Rgb heat_color(double value) noexcept;

/// Cell value as printed in the SVG ("%.2f").
std::string cell_text(double value);

/// n x n grid with a value in each cell. With GT, a rule separates the last
/// row and column from the replies.
std::string render_svg(const SimilarityMatrix& matrix);

/// Header row ",<labels...>", then one "<label>,<values...>" row per matrix row.
/// Values use %.17g so parsing restores them exactly.
std::string render_csv(const SimilarityMatrix& matrix);
SimilarityMatrix parse_csv(std::string_view csv, Measure measure);

} // namespace checkembed

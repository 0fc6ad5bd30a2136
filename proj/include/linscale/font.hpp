#pragma once

#include <array>
#include <string_view>
#include <vector>

// Embedded 5x7 bitmap font: the synthetic renderer draws with it and the
// built-in recognizer matches against it.

namespace linscale::font {

inline constexpr int kCols = 5;
inline constexpr int kRows = 7;
inline constexpr int kAdvance = 7;  // cells per character including the gap

struct Glyph {
    char ch;
    std::array<std::string_view, kRows> rows;  // '#' = ink

    bool ink(int col, int row) const { return rows[row][col] == '#'; }
    /// First and last columns holding ink.
    int first_col() const;
    int last_col() const;
};

/// Digits 0-9 and '.'.
const std::vector<Glyph>& glyphs();

/// nullptr for unsupported characters.
const Glyph* find(char ch);

/// Width in cells of `text` as laid out by the renderer.
int text_cells(std::string_view text);

}  // namespace linscale::font

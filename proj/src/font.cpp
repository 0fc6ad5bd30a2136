#include "linscale/font.hpp"

namespace linscale::font {

int Glyph::first_col() const {
    for (int c = 0; c < kCols; ++c)
        for (int r = 0; r < kRows; ++r)
            if (ink(c, r)) return c;
    return 0;
}

int Glyph::last_col() const {
    for (int c = kCols - 1; c >= 0; --c)
        for (int r = 0; r < kRows; ++r)
            if (ink(c, r)) return c;
    return kCols - 1;
}

const std::vector<Glyph>& glyphs() {
    static const std::vector<Glyph> set = {
        {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
        {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
        {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
        {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
        {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
        {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
        {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
        {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
        {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
        {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
        {'.', {".....", ".....", ".....", ".....", ".....", ".##..", ".##.."}},
    };
    return set;
}

const Glyph* find(char ch) {
    for (const auto& g : glyphs())
        if (g.ch == ch) return &g;
    return nullptr;
}

int text_cells(std::string_view text) {
    if (text.empty()) return 0;
    return static_cast<int>(text.size()) * kAdvance - (kAdvance - kCols);
}

}  // namespace linscale::font

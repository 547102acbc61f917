"""Category-to-tile mapping: positions in the 3x3 grid and Paired colors.

Each bin subdivides into nine tiles; the center tile stays white so it does
not tint its neighbours. Codes occupy the eight outer cells in reading
order; length categories use only the top two rows. All colors come from
the 8-class ColorBrewer "Paired" qualitative palette.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .model import CategoryMode, category_count

Color = tuple[int, int, int]

WHITE: Color = (255, 255, 255)

#: Paired palette, in category order (code mode).
#: red, bright green, orange, bright blue, blue, bright orange, green, rose.
CODE_COLORS: tuple[Color, ...] = (
    (227, 26, 28),
    (178, 223, 138),
    (255, 127, 0),
    (166, 206, 227),
    (31, 120, 180),
    (253, 191, 111),
    (51, 160, 44),
    (251, 154, 153),
)

#: Outer cells of the 3x3 grid in reading order; (1,1) is the white center.
CODE_POSITIONS: tuple[tuple[int, int], ...] = (
    (0, 0), (0, 1), (0, 2),
    (1, 0), (1, 2),
    (2, 0), (2, 1), (2, 2),
)

#: Length categories reuse the first five Paired colors on the top rows.
LENGTH_COLORS: tuple[Color, ...] = CODE_COLORS[:5]
LENGTH_POSITIONS: tuple[tuple[int, int], ...] = (
    (0, 0), (0, 1), (0, 2),
    (1, 0), (1, 2),
)


class TileStyle(NamedTuple):
    """Where a category's tile sits inside a bin and which color fills it."""

    category: int
    position: tuple[int, int]
    color: Color


def code_tile(code: int) -> TileStyle:
    """Tile position and color for a code 0..7."""
    if not 0 <= code < 8:
        raise ValueError(f"code out of range [0, 8): {code}")
    return TileStyle(code, CODE_POSITIONS[code], CODE_COLORS[code])


def length_tile(category: int) -> TileStyle:
    """Tile position and color for a length category 0..4."""
    if not 0 <= category < 5:
        raise ValueError(f"length category out of range [0, 5): {category}")
    return TileStyle(category, LENGTH_POSITIONS[category], LENGTH_COLORS[category])


def tile_style(mode: CategoryMode, category: int) -> TileStyle:
    return code_tile(category) if mode is CategoryMode.CODE else length_tile(category)


def tile_styles(mode: CategoryMode) -> tuple[TileStyle, ...]:
    """All tile styles for a mode, index-aligned with category numbers."""
    return tuple(tile_style(mode, c) for c in range(category_count(mode)))


def category_color(mode: CategoryMode, category: int) -> Color:
    return tile_style(mode, category).color


def composite_on_white(color: Color, opacity: float) -> Color:
    """Blend a color over the white background at the given opacity.

    Channel-wise round(opacity*c + (1-opacity)*255), half rounded up.
    """
    if not 0.0 <= opacity <= 1.0:
        raise ValueError(f"opacity outside [0, 1]: {opacity}")
    return tuple(
        int(math.floor(opacity * c + (1.0 - opacity) * 255.0 + 0.5)) for c in color
    )

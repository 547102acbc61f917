"""Parsing of view parameters shared by the CLI and the HTTP API."""

from __future__ import annotations

from .binning import FilterState, Scaling, apply_filter
from .model import CategoryMode, Dataset, N_ATTRIBUTES


def _slug(descriptor: str) -> str:
    return descriptor.lower().replace(" ", "_").replace("-", "_")


def resolve_attribute(dataset: Dataset, token: str) -> int:
    """Resolve an attribute index from a number or a descriptor slug.

    Accepts "0".."7", slugs like "mef_h3k4me3" or "length", and "cpg".
    """
    token = token.strip().lower()
    if token.lstrip("-").isdigit():
        index = int(token)
        if not 0 <= index < N_ATTRIBUTES:
            raise ValueError(f"attribute index out of range: {index}")
        return index
    if token == "cpg":
        return 6
    for attr in dataset.attributes:
        if _slug(attr.descriptor) == token:
            return attr.index
    known = ", ".join(_slug(a.descriptor) for a in dataset.attributes)
    raise ValueError(f"unknown attribute {token!r}; known: {known}")


def parse_filter_spec(dataset: Dataset, spec: str) -> tuple[int, float, float]:
    """Parse one ``attr:lo:hi`` token."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"filter must be attr:lo:hi, got {spec!r}")
    index = resolve_attribute(dataset, parts[0])
    try:
        lo, hi = float(parts[1]), float(parts[2])
    except ValueError:
        raise ValueError(f"non-numeric filter bounds in {spec!r}") from None
    return index, lo, hi


def build_filters(dataset: Dataset, specs: list[str] | None) -> FilterState:
    """Full-range filters narrowed by each ``attr:lo:hi`` spec in turn."""
    state = FilterState.full(dataset)
    for spec in specs or []:
        index, lo, hi = parse_filter_spec(dataset, spec)
        state = apply_filter(state, index, lo, hi)
    return state


def parse_cell(token: str) -> tuple[int, int]:
    """Parse a ``ROW,COL`` cell token."""
    parts = token.split(",")
    if len(parts) != 2:
        raise ValueError(f"cell must be ROW,COL, got {token!r}")
    try:
        row, col = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"non-integer cell indices in {token!r}") from None
    if not (0 <= row < N_ATTRIBUTES and 0 <= col < N_ATTRIBUTES):
        raise ValueError(f"cell ({row}, {col}) outside the 8x8 grid")
    return row, col


def parse_scaling(token: str) -> Scaling:
    try:
        return Scaling(token.lower())
    except ValueError:
        raise ValueError(f"scaling must be 'local' or 'global', got {token!r}") from None


def parse_mode(token: str) -> CategoryMode:
    try:
        return CategoryMode(token.lower())
    except ValueError:
        raise ValueError(f"mode must be 'code' or 'length', got {token!r}") from None

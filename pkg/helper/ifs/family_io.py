"""
Plain-text structured format for family specs and sweep plans.

One `key = value` per line, `#` starts a comment, values are scalars or
bracketed comma-separated lists of exact fractions:

    name = my-family
    base = 3
    interval = [0, 10]
    weights = [1/2, 1/4, 1/8, 1/8]
    maps[0].ratio = [1/3]
    maps[0].translation = [0, 1]
"""

import re
from pathlib import Path
from typing import Dict, List, Union

from ..config.logging_config import get_logger
from .errors import ParseError
from .family import AffineMapSpec, FamilySpec
from .polynomial import ParamPoly
from .presets import is_preset, resolve_preset
from .rational import format_fraction, parse_fraction

logger = get_logger(__name__)

Value = Union[str, List[str]]

_MAP_KEY = re.compile(r"^maps\[(\d+)\]\.(ratio|translation)$")


def parse_structured_text(text: str) -> Dict[str, Value]:
    """Parse key = value lines into a flat dict of strings and string lists."""
    entries: Dict[str, Value] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if key in entries:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        if value.startswith("["):
            if not value.endswith("]"):
                raise ParseError(f"line {lineno}: unterminated list for {key!r}")
            inner = value[1:-1].strip()
            entries[key] = [item.strip() for item in inner.split(",")] if inner else []
        else:
            entries[key] = value
    return entries


def format_structured_text(entries: Dict[str, Value]) -> str:
    lines = []
    for key, value in entries.items():
        if isinstance(value, (list, tuple)):
            value = "[" + ", ".join(value) + "]"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _require_list(entries: Dict[str, Value], key: str) -> List[str]:
    value = entries.get(key)
    if not isinstance(value, list):
        raise ParseError(f"Expected a list for {key!r}")
    return value


def family_from_text(text: str) -> FamilySpec:
    """Build a FamilySpec from the structured text format."""
    entries = parse_structured_text(text)
    ratios: Dict[int, ParamPoly] = {}
    translations: Dict[int, ParamPoly] = {}
    for key in entries:
        match = _MAP_KEY.match(key)
        if not match:
            continue
        index, field_name = int(match.group(1)), match.group(2)
        poly = ParamPoly.parse(_require_list(entries, key))
        (ratios if field_name == "ratio" else translations)[index] = poly

    indices = sorted(set(ratios) | set(translations))
    if indices != list(range(len(indices))) or set(ratios) != set(translations):
        raise ParseError(f"Map entries must be numbered 0..m-1 with ratio and translation each; "
                         f"got ratios {sorted(ratios)} and translations {sorted(translations)}")

    maps = tuple(AffineMapSpec(ratios[i], translations[i]) for i in indices)
    interval = _require_list(entries, "interval")
    if len(interval) != 2:
        raise ParseError(f"interval needs two endpoints, got {interval}")
    weights = tuple(parse_fraction(w) for w in _require_list(entries, "weights"))
    base = entries.get("base")
    name = entries.get("name", "custom")

    return FamilySpec(
        maps=maps,
        interval=(parse_fraction(interval[0]), parse_fraction(interval[1])),
        weights=weights,
        homogeneous_base=int(base) if base is not None else None,
        name=str(name),
    )


def family_to_text(family: FamilySpec) -> str:
    entries: Dict[str, Value] = {"name": family.name}
    if family.homogeneous_base is not None:
        entries["base"] = str(family.homogeneous_base)
    entries["interval"] = [format_fraction(x) for x in family.interval]
    entries["weights"] = [format_fraction(w) for w in family.weights]
    for index, spec in enumerate(family.maps):
        entries[f"maps[{index}].ratio"] = list(spec.ratio.to_strings())
        entries[f"maps[{index}].translation"] = list(spec.translation.to_strings())
    return format_structured_text(entries)


def load_family(source: str) -> FamilySpec:
    """Resolve a preset name or read a family file."""
    if is_preset(source):
        return resolve_preset(source)
    path = Path(source)
    if not path.is_file():
        raise ParseError(f"{source!r} is neither a preset nor a readable file")
    logger.info(f"Loading family spec from {path}")
    return family_from_text(path.read_text(encoding="utf-8"))

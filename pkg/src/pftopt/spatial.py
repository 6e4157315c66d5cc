"""Parsers and writers for the spatial artifacts the workflows exchange:
GeoDA-style `.gal` contiguity weights, linear (from,to,distance) CSV matrices,
great-circle distances, and two-column assignment CSVs."""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

from .models import AdjacencySet, DistanceMatrix, InputError

__all__ = [
    "GalParseError",
    "DistanceCsvError",
    "SpatialWeights",
    "GeoPoint",
    "parse_gal",
    "render_gal",
    "weights_to_pairs",
    "parse_distance_matrix",
    "geodesic_miles",
    "write_assignment_csv",
]

EARTH_RADIUS_MILES = 3958.7613


class GalParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class DistanceCsvError(ValueError):
    pass


@dataclass(frozen=True)
class SpatialWeights:
    header: tuple  # (flag, area count, dataset name, key name) tokens
    neighbors: dict  # area id -> ordered neighbor id list

    def __post_init__(self) -> None:
        count = int(self.header[1])
        if count != len(self.neighbors):
            raise InputError(
                f"header declares {count} areas, found {len(self.neighbors)} entries"
            )


@dataclass(frozen=True)
class GeoPoint:
    id: object
    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not -90 <= self.lat <= 90:
            raise InputError(f"latitude {self.lat} out of range")
        if not -180 <= self.lon <= 180:
            raise InputError(f"longitude {self.lon} out of range")


def parse_gal(text: str) -> SpatialWeights:
    """Parse a `.gal` file: a header line whose second token is the area
    count, then alternating `<area> <neighbor-count>` and neighbor-id lines."""
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise GalParseError("empty file", 1)
    header = tuple(lines[0].split())
    if len(header) < 2:
        raise GalParseError("header needs at least a flag and an area count", 1)
    try:
        count = int(header[1])
    except ValueError:
        raise GalParseError(f"area count {header[1]!r} is not numeric", 1)
    neighbors: dict = {}
    line_no = 1
    idx = 1
    for _ in range(count):
        # Skip blank lines between records.
        while idx < len(lines) and not lines[idx].split():
            idx += 1
        if idx >= len(lines):
            raise GalParseError("truncated file: missing area entry", line_no + 1)
        line_no = idx + 1
        tokens = lines[idx].split()
        if len(tokens) != 2:
            raise GalParseError(f"expected '<area> <count>', got {lines[idx]!r}", line_no)
        area = tokens[0]
        try:
            n_nb = int(tokens[1])
        except ValueError:
            raise GalParseError(f"neighbor count {tokens[1]!r} is not numeric", line_no)
        if area in neighbors:
            raise GalParseError(f"duplicate area {area!r}", line_no)
        idx += 1
        if n_nb == 0:
            nb_tokens = []
            # Zero-neighbor entries may or may not carry an empty line; accept
            # an empty following line, otherwise consume nothing.
            if idx < len(lines) and not lines[idx].split():
                idx += 1
        else:
            if idx >= len(lines):
                raise GalParseError(f"area {area!r}: missing neighbor line", line_no + 1)
            nb_tokens = lines[idx].split()
            if len(nb_tokens) != n_nb:
                raise GalParseError(
                    f"area {area!r} declares {n_nb} neighbors, line has {len(nb_tokens)}",
                    idx + 1,
                )
            idx += 1
        neighbors[area] = nb_tokens
    unknown = {nb for nbs in neighbors.values() for nb in nbs} - set(neighbors)
    if unknown:
        warnings.warn(f"neighbor ids not listed as areas: {sorted(unknown)}")
    return SpatialWeights(header=header, neighbors=neighbors)


def render_gal(weights: SpatialWeights) -> str:
    """Canonical rendering; parse_gal(render_gal(w)) == w."""
    out = [" ".join(str(tok) for tok in weights.header)]
    for area, nbs in weights.neighbors.items():
        out.append(f"{area} {len(nbs)}")
        if nbs:
            out.append(" ".join(nbs))
    return "\n".join(out) + "\n"


def weights_to_pairs(weights: SpatialWeights) -> AdjacencySet:
    """Deduplicated unordered boundary pairs; a one-sided mention still yields
    the pair but triggers a warning."""
    areas = tuple(weights.neighbors)
    pairs = set()
    asymmetric = []
    for area, nbs in weights.neighbors.items():
        for nb in nbs:
            if nb == area:
                continue
            pairs.add(frozenset((area, nb)))
            if area not in weights.neighbors.get(nb, ()):
                asymmetric.append((area, nb))
    if asymmetric:
        warnings.warn(f"asymmetric neighbor mentions: {asymmetric}")
    all_ids = set(areas)
    extra = tuple(
        sorted({b for pair in pairs for b in pair if b not in all_ids})
    )
    return AdjacencySet(area_ids=areas + extra, pairs=frozenset(pairs))


def parse_distance_matrix(
    text: str, from_col: int = 0, to_col: int = 1, dist_col: int = 2
) -> DistanceMatrix:
    """Densify a linear (from,to,distance) CSV with a header row into a
    DistanceMatrix; ids keep first-appearance order."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DistanceCsvError("empty file")
    body = rows[1:]
    entries: dict = {}
    from_ids: list = []
    to_ids: list = []
    for line_no, row in enumerate(body, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            f = row[from_col].strip()
            t = row[to_col].strip()
            dist_cell = row[dist_col].strip()
        except IndexError:
            raise DistanceCsvError(f"line {line_no}: missing column")
        try:
            dist = float(dist_cell)
        except ValueError:
            raise DistanceCsvError(f"line {line_no}: distance {dist_cell!r} is not numeric")
        if dist < 0:
            raise DistanceCsvError(f"line {line_no}: negative distance for ({f}, {t})")
        if (f, t) in entries:
            raise DistanceCsvError(f"duplicate (from, to) pair ({f}, {t})")
        entries[(f, t)] = dist
        if f not in from_ids:
            from_ids.append(f)
        if t not in to_ids:
            to_ids.append(t)
    if not entries:
        raise DistanceCsvError("no data rows")
    matrix = []
    for f in from_ids:
        row_vals = []
        for t in to_ids:
            if (f, t) not in entries:
                raise DistanceCsvError(f"missing (from, to) pair ({f}, {t})")
            row_vals.append(entries[(f, t)])
        matrix.append(tuple(row_vals))
    return DistanceMatrix(from_ids=tuple(from_ids), to_ids=tuple(to_ids), d=tuple(matrix))


def geodesic_miles(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle (haversine) distance on a mean-radius sphere, in miles."""
    la1, lo1, la2, lo2 = map(math.radians, (a.lat, a.lon, b.lat, b.lon))
    s = (
        math.sin((la2 - la1) / 2) ** 2
        + math.cos(la1) * math.cos(la2) * math.sin((lo2 - lo1) / 2) ** 2
    )
    return 2 * EARTH_RADIUS_MILES * math.asin(min(1.0, math.sqrt(s)))


def write_assignment_csv(assignment: dict, id_header: str, label_header: str) -> str:
    """Two-column CSV, one row per id in input order, no index column."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([id_header, label_header])
    for key, label in assignment.items():
        writer.writerow([key, label])
    return out.getvalue()

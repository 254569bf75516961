"""
Versioned binary bundle of a preprocessed curve.

All multi-byte values are little-endian. Layout (version 1)::

    magic      5s   b"PFRE1"
    version    u16
    space      u8   0 euclid, 1 graph
    p_norm     u8   0 p1, 1 p2, 2 pinf
    dimension  u32  0 for graph curves
    alpha      f64  slack of the oracle that measured the edges
    c_config   f64  configured packedness, NaN when unset
    c_estimate f64  estimated packedness, NaN when unset
    nn         u8   1 when the Hausdorff structures were built
    n          u64
    points     n*d f64 or n i64
    edges      (n-1) f64
    offset     u32 byte count, then signed two's-complement integer
    tadd       u64 count, count f64, u64 pair count
    graph      (graph only) u64 N, u64 M, M * (i64 u, i64 v, f64 w)

Leaf widths of the simplification tree are the fixed-point images of the
stored edge lengths, so the tree is rebuilt exactly on load.
"""

import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from engine.curve_index import CurveIndex
from engine.curve_model import Curve
from engine.curve_simplification import DynamicCurve, build_tree
from engine.metric_oracles import EuclideanOracle, GraphOracle, WeightedGraph, euclidean_oracle, graph_oracle
from engine.tadd import TaddIntervals
from utils.errors import BundleFormatError, CurveLoadError
from utils.logs import get_logger
from utils.types import PNorm, SpaceKind

bundle_logger = get_logger("bundle")

MAGIC = b"PFRE1"
VERSION = 1

_SPACE_CODES = {SpaceKind.EUCLIDEAN: 0, SpaceKind.GRAPH: 1}
_PNORM_CODES = {PNorm.P1: 0, PNorm.P2: 1, PNorm.PINF: 2}
_HEADER = struct.Struct("<5sHBBIdddBQ")

PathLike = Union[str, Path]


@dataclass(frozen=True)
class BundleMetadata:
    """
    Descriptive part of a bundle.

    Attributes:
        version (int): Format version the bundle was written with.
        space (SpaceKind): Ambient space of the curve.
        p_norm (Optional[PNorm]): Norm of a Euclidean space.
        dimension (int): Point dimension, 0 for graph curves.
        alpha (float): Oracle slack of the stored edge lengths.
        packedness (Optional[float]): Configured packedness constant.
        packedness_estimate (Optional[float]): Lower bound found by estimation.
        nn (bool): Hausdorff structures were built at preprocessing time.
        n (int): Number of vertices.
    """

    version: int
    space: SpaceKind
    p_norm: Optional[PNorm]
    dimension: int
    alpha: float
    packedness: Optional[float]
    packedness_estimate: Optional[float]
    nn: bool
    n: int

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "space": self.space.value,
            "p_norm": self.p_norm.value if self.p_norm else None,
            "dimension": self.dimension,
            "alpha": self.alpha,
            "packedness": self.packedness,
            "packedness_estimate": self.packedness_estimate,
            "nn": self.nn,
            "n": self.n,
        }


def _optional(value: float) -> Optional[float]:
    return None if math.isnan(value) else value


def save_bundle(path: PathLike, index: CurveIndex, packedness_estimate: Optional[float] = None) -> BundleMetadata:
    """Write index to path and return the metadata that was stored."""
    oracle = index.oracle
    curve = index.curve
    if isinstance(oracle, EuclideanOracle):
        p_norm, dimension = oracle.p_norm, oracle.dimension
    elif isinstance(oracle, GraphOracle):
        p_norm, dimension = None, 0
    else:
        raise BundleFormatError(f"cannot store an index over a {type(oracle).__name__}")

    metadata = BundleMetadata(
        version=VERSION,
        space=oracle.space,
        p_norm=p_norm,
        dimension=dimension,
        alpha=curve.alpha,
        packedness=index.packedness,
        packedness_estimate=packedness_estimate,
        nn=index.has_nn,
        n=curve.n,
    )
    offset = curve.head_offset
    offset_bytes = offset.to_bytes((offset.bit_length() + 8) // 8, "little", signed=True)
    tadd = index.tadd

    chunks = [
        _HEADER.pack(
            MAGIC,
            VERSION,
            _SPACE_CODES[metadata.space],
            _PNORM_CODES[p_norm] if p_norm else 0,
            dimension,
            metadata.alpha,
            math.nan if metadata.packedness is None else metadata.packedness,
            math.nan if packedness_estimate is None else packedness_estimate,
            int(metadata.nn),
            curve.n,
        )
    ]
    if metadata.space is SpaceKind.EUCLIDEAN:
        chunks.append(np.asarray(curve.points, dtype="<f8").reshape(curve.n, dimension).tobytes())
    else:
        chunks.append(np.asarray(curve.points, dtype="<i8").tobytes())
    chunks.append(np.asarray(curve.edge_lengths, dtype="<f8").tobytes())
    chunks.append(struct.pack("<I", len(offset_bytes)) + offset_bytes)
    chunks.append(struct.pack("<Q", len(tadd.values)) + np.asarray(tadd.values, dtype="<f8").tobytes())
    chunks.append(struct.pack("<Q", tadd.pairs))
    if metadata.space is SpaceKind.GRAPH:
        graph = oracle.graph
        chunks.append(struct.pack("<QQ", graph.n_vertices, len(graph.edges)))
        for u, v, w in graph.edges:
            chunks.append(struct.pack("<qqd", u, v, w))

    Path(path).write_bytes(b"".join(chunks))
    bundle_logger.info(f"💾 Saved bundle with {curve.n} vertices to {path}")
    return metadata


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise BundleFormatError(f"bundle truncated at byte {self.pos}")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str) -> tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def array(self, dtype: str, count: int) -> np.ndarray:
        return np.frombuffer(self.take(np.dtype(dtype).itemsize * count), dtype=dtype)


def read_metadata(path: PathLike) -> BundleMetadata:
    """Decode only the bundle header."""
    return _read_header(_Reader(_read_bytes(path)))


def _read_bytes(path: PathLike) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CurveLoadError(f"cannot read bundle {path}: {e}") from e


def _read_header(reader: _Reader) -> BundleMetadata:
    if len(reader.data) < len(MAGIC) or reader.data[: len(MAGIC)] != MAGIC:
        raise BundleFormatError("not a bundle: bad magic")
    magic, version, space_code, pnorm_code, dimension, alpha, c_config, c_estimate, nn, n = reader.unpack(
        _HEADER.format
    )
    if version != VERSION:
        raise BundleFormatError(f"unsupported bundle version {version}")
    spaces = {code: space for space, code in _SPACE_CODES.items()}
    norms = {code: norm for norm, code in _PNORM_CODES.items()}
    if space_code not in spaces or pnorm_code not in norms:
        raise BundleFormatError(f"unknown space code {space_code} / norm code {pnorm_code}")
    space = spaces[space_code]
    if n < 1 or (space is SpaceKind.EUCLIDEAN and dimension < 1):
        raise BundleFormatError(f"invalid sizes n={n}, dimension={dimension}")
    return BundleMetadata(
        version=version,
        space=space,
        p_norm=norms[pnorm_code] if space is SpaceKind.EUCLIDEAN else None,
        dimension=dimension,
        alpha=alpha,
        packedness=_optional(c_config),
        packedness_estimate=_optional(c_estimate),
        nn=bool(nn),
        n=n,
    )


def load_bundle(path: PathLike) -> Tuple[CurveIndex, BundleMetadata]:
    """
    Read a bundle written by ``save_bundle``.

    Raises:
        BundleFormatError: On bad magic, an unknown version or a truncated body.
    """
    reader = _Reader(_read_bytes(path))
    metadata = _read_header(reader)
    n = metadata.n

    if metadata.space is SpaceKind.EUCLIDEAN:
        coords = reader.array("<f8", n * metadata.dimension).reshape(n, metadata.dimension)
        points = [tuple(float(x) for x in row) for row in coords]
    else:
        points = [int(v) for v in reader.array("<i8", n)]
    edges = [float(e) for e in reader.array("<f8", n - 1)]
    (offset_size,) = reader.unpack("<I")
    offset = int.from_bytes(reader.take(offset_size), "little", signed=True)
    (tadd_count,) = reader.unpack("<Q")
    values = tuple(float(v) for v in reader.array("<f8", tadd_count))
    (pairs,) = reader.unpack("<Q")

    if metadata.space is SpaceKind.EUCLIDEAN:
        oracle = euclidean_oracle(metadata.dimension, metadata.p_norm)
    else:
        n_vertices, n_edges = reader.unpack("<QQ")
        graph_edges = [reader.unpack("<qqd") for _ in range(n_edges)]
        oracle = graph_oracle(WeightedGraph(n_vertices, [(int(u), int(v), float(w)) for u, v, w in graph_edges]))
    if reader.pos != len(reader.data):
        raise BundleFormatError(f"{len(reader.data) - reader.pos} trailing bytes after the bundle body")

    curve = DynamicCurve(Curve.from_parts(points, edges, metadata.space, metadata.alpha), head_offset=offset)
    index = CurveIndex(curve, oracle, build_tree(curve), TaddIntervals(values, pairs), metadata.packedness)
    if metadata.nn:
        index.tadd_2d
        index.nn
    bundle_logger.info(f"📂 Loaded bundle with {n} vertices from {path}")
    return index, metadata

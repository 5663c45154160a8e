"""Sensor-log ingestion, pivoting, standardization, and synthetic instances.

A raw log becomes a SensorTable of (node, slot, attribute, value) records;
tables pivot to node x time matrices or time x node x attribute tensors with
a native-gap observation mask. Synthetic generators produce the low-rank
instances used for benchmarking.
"""

import csv
import math
import re
from dataclasses import dataclass

import numpy as np

from .tensor_ops import fold, unfold

__all__ = [
    "SensorTable",
    "StandardizationParams",
    "INTEL_ATTRIBUTES",
    "parse_intel_berkeley",
    "parse_long_csv",
    "write_long_csv",
    "pivot_matrix",
    "pivot_tensor",
    "standardize_params",
    "table_from_matrix",
    "table_from_tensor",
    "synth_lowrank_matrix",
    "synth_tucker_tensor",
    "synth_mixture_tensor",
    "parse_synth_spec",
    "densest_block",
]

INTEL_ATTRIBUTES = ("temperature", "humidity", "light", "voltage")


def _natural_key(node_id):
    return (0, int(node_id), "") if node_id.isdigit() else (1, 0, node_id)


def _rng(seed):
    # Domain-tagged stream, distinct from the mask generators' streams.
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(1,)))
    )


@dataclass
class SensorTable:
    """Deduplicated sensor readings keyed by (node, slot, attribute).

    Attributes
    ----------
    values : dict
        (node_id, slot, attribute) -> float, one value per key.
    nodes : tuple of str
        Node registry in natural order (numeric ids sort numerically).
    slots : range
        Dense slot range from the smallest to the largest observed slot.
    attributes : tuple of str
        Attribute registry in schema order.
    malformed_lines : int
        Input lines skipped during parsing.
    duplicate_count : int
        Repeated (node, slot, attribute) readings resolved last-wins.
    """

    values: dict
    nodes: tuple
    slots: range
    attributes: tuple
    malformed_lines: int = 0
    duplicate_count: int = 0

    @classmethod
    def from_records(cls, records, attributes=None, malformed_lines=0):
        """Build a table from (node, slot, attribute, value) tuples.

        Later duplicates of a key overwrite earlier ones and are counted.
        """
        values = {}
        duplicates = 0
        seen_attrs = []
        for node, slot, attr, value in records:
            node, slot, attr, value = str(node), int(slot), str(attr), float(value)
            if slot < 0:
                raise ValueError(f"negative slot {slot}")
            if not math.isfinite(value):
                raise ValueError(f"non-finite value for ({node}, {slot}, {attr})")
            key = (node, slot, attr)
            if key in values:
                duplicates += 1
            else:
                if attr not in seen_attrs:
                    seen_attrs.append(attr)
            values[key] = value
        if attributes is not None:
            attrs = tuple(str(a) for a in attributes)
            unknown = [a for a in seen_attrs if a not in attrs]
            if unknown:
                raise ValueError(f"records use attributes outside the registry: {unknown}")
        else:
            attrs = tuple(seen_attrs)
        nodes = tuple(sorted({k[0] for k in values}, key=_natural_key))
        if values:
            lo = min(k[1] for k in values)
            hi = max(k[1] for k in values)
            slots = range(lo, hi + 1)
        else:
            slots = range(0)
        return cls(values, nodes, slots, attrs, malformed_lines, duplicates)

    @property
    def records(self):
        """Records as a list sorted by (node, slot, attribute)."""
        return sorted(
            ((n, s, a, v) for (n, s, a), v in self.values.items()),
            key=lambda r: (_natural_key(r[0]), r[1], r[2]),
        )

    def __len__(self):
        return len(self.values)


def parse_intel_berkeley(stream):
    """Parse the Intel Berkeley lab log.

    Expected line format (whitespace separated)::

        date time epoch moteid temperature humidity light voltage

    Lines may end early; present attribute fields each yield one record.
    Malformed lines are counted and skipped; more than 50% malformed lines
    raises, since that signals the wrong format altogether.
    """
    records = []
    malformed = 0
    total = 0
    for line in stream:
        fields = line.split()
        if not fields:
            continue
        total += 1
        if len(fields) < 4 or len(fields) > 8:
            malformed += 1
            continue
        try:
            slot = int(fields[2])
            node_num = int(fields[3])
            if slot < 0 or node_num < 0:
                raise ValueError
            vals = [float(v) for v in fields[4:]]
            if not all(math.isfinite(v) for v in vals):
                raise ValueError
        except ValueError:
            malformed += 1
            continue
        node = str(node_num)
        for attr, v in zip(INTEL_ATTRIBUTES, vals):
            records.append((node, slot, attr, v))
    if total and malformed * 2 > total:
        raise ValueError(
            f"{malformed} of {total} lines malformed; "
            "input does not look like an Intel Berkeley log"
        )
    return SensorTable.from_records(
        records, attributes=INTEL_ATTRIBUTES, malformed_lines=malformed
    )


def parse_long_csv(stream, node_col="node", slot_col="slot"):
    """Parse a long-format CSV: header ``node,slot,<attr1>,<attr2>,...``.

    Empty cells yield no record. Duplicate (node, slot, attribute) cells
    resolve last-wins with the duplicate counter incremented.
    """
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ValueError("missing header row") from None
    if node_col not in header or slot_col not in header:
        raise ValueError(f"header must contain {node_col!r} and {slot_col!r} columns")
    node_i = header.index(node_col)
    slot_i = header.index(slot_col)
    attr_cols = [(h, i) for i, h in enumerate(header) if i not in (node_i, slot_i)]
    if not attr_cols:
        raise ValueError("no attribute columns in header")

    records = []
    malformed = 0
    total = 0
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        total += 1
        if len(row) != len(header):
            malformed += 1
            continue
        try:
            node = row[node_i].strip()
            slot = int(row[slot_i])
            if not node or slot < 0:
                raise ValueError
            line_records = []
            for attr, i in attr_cols:
                cell = row[i].strip()
                if not cell:
                    continue
                v = float(cell)
                if not math.isfinite(v):
                    raise ValueError
                line_records.append((node, slot, attr, v))
        except ValueError:
            malformed += 1
            continue
        records.extend(line_records)
    if total and malformed * 2 > total:
        raise ValueError(f"{malformed} of {total} rows malformed")
    return SensorTable.from_records(
        records, attributes=[h for h, _ in attr_cols], malformed_lines=malformed
    )


def write_long_csv(table, stream):
    """Serialize a SensorTable in the long CSV format (inverse of parse)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["node", "slot", *table.attributes])
    by_cell = {}
    for (node, slot, attr), v in table.values.items():
        by_cell.setdefault((node, slot), {})[attr] = v
    for node, slot in sorted(by_cell, key=lambda p: (_natural_key(p[0]), p[1])):
        cells = by_cell[(node, slot)]
        row = [node, slot]
        row += [repr(cells[a]) if a in cells else "" for a in table.attributes]
        writer.writerow(row)


def pivot_matrix(table, attribute, nodes=None, slots=None):
    """Pivot one attribute to a nodes x slots matrix plus observation mask.

    Rows follow the node registry order (or the explicit `nodes` list),
    columns the dense slot range (or the explicit `slots` sequence).
    Entries absent from the table are unobserved: mask False, value 0.
    """
    if attribute not in table.attributes:
        raise ValueError(f"unknown attribute {attribute!r}")
    nodes = list(table.nodes) if nodes is None else [str(n) for n in nodes]
    slots = list(table.slots) if slots is None else [int(s) for s in slots]
    if not nodes or not slots:
        raise ValueError("empty selection")
    row = {n: i for i, n in enumerate(nodes)}
    col = {s: j for j, s in enumerate(slots)}
    matrix = np.zeros((len(nodes), len(slots)))
    mask = np.zeros(matrix.shape, dtype=bool)
    for (n, s, a), v in table.values.items():
        if a != attribute:
            continue
        i = row.get(n)
        j = col.get(s)
        if i is None or j is None:
            continue
        matrix[i, j] = v
        mask[i, j] = True
    if not mask.any():
        raise ValueError(f"selection contains no observations of {attribute!r}")
    return matrix, mask


def pivot_tensor(table, attributes, standardize=False):
    """Pivot several attributes to a (time, node, attribute) tensor.

    Parameters
    ----------
    table : SensorTable
    attributes : sequence of str
        At least two, all present in the registry.
    standardize : bool
        When True, z-score each attribute slice over its observed entries;
        the returned StandardizationParams invert the transform. When
        False, identity params are returned.

    Returns
    -------
    (ndarray, ndarray, StandardizationParams)
        Tensor of shape (t, n, k), boolean mask, and the params.
    """
    attrs = [str(a) for a in attributes]
    if len(attrs) < 2:
        raise ValueError("need at least two attributes for a tensor")
    for a in attrs:
        if a not in table.attributes:
            raise ValueError(f"unknown attribute {a!r}")
    nodes = list(table.nodes)
    slots = list(table.slots)
    if not nodes or not slots:
        raise ValueError("empty selection")
    srow = {s: i for i, s in enumerate(slots)}
    ncol = {n: j for j, n in enumerate(nodes)}
    adep = {a: d for d, a in enumerate(attrs)}
    tensor = np.zeros((len(slots), len(nodes), len(attrs)))
    mask = np.zeros(tensor.shape, dtype=bool)
    for (n, s, a), v in table.values.items():
        d = adep.get(a)
        if d is None:
            continue
        tensor[srow[s], ncol[n], d] = v
        mask[srow[s], ncol[n], d] = True
    if not mask.any():
        raise ValueError("selection contains no observations")
    if standardize:
        params = standardize_params(tensor, mask, attrs)
        tensor = np.where(mask, params.apply(tensor), 0.0)
    else:
        params = StandardizationParams.identity(attrs)
    return tensor, mask, params


@dataclass(frozen=True)
class StandardizationParams:
    """Per-attribute affine transform along the last axis.

    apply() maps original units to z-scores, invert() maps back; the two
    compose to the identity. For a single-attribute matrix the one
    (mean, std) pair broadcasts over the whole array.
    """

    attributes: tuple
    means: tuple
    stds: tuple

    def __post_init__(self):
        if not (len(self.attributes) == len(self.means) == len(self.stds)):
            raise ValueError("attributes, means, and stds must align")
        if any(s <= 0 for s in self.stds):
            raise ValueError("standardization stds must be positive")

    @classmethod
    def identity(cls, attributes):
        k = len(tuple(attributes))
        return cls(tuple(attributes), (0.0,) * k, (1.0,) * k)

    def apply(self, x):
        return (np.asarray(x, dtype=np.float64) - self.means) / self.stds

    def invert(self, x):
        return np.asarray(x, dtype=np.float64) * self.stds + self.means


def standardize_params(data, mask, attributes):
    """Fit per-attribute mean/std over the observed entries of `data`.

    The attribute axis is the last one; a 2-D array is treated as a single
    attribute. Population std; zero observed variance raises.
    """
    data = np.asarray(data, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    attrs = tuple(str(a) for a in attributes)
    if data.ndim == 2:
        if len(attrs) != 1:
            raise ValueError("a matrix carries exactly one attribute")
        slices = [(data, mask)]
    else:
        if data.shape[-1] != len(attrs):
            raise ValueError(
                f"last axis has {data.shape[-1]} slices, got {len(attrs)} attributes"
            )
        slices = [(data[..., j], mask[..., j]) for j in range(len(attrs))]
    means, stds = [], []
    for (sl, sm), a in zip(slices, attrs):
        vals = sl[sm]
        if vals.size == 0:
            raise ValueError(f"attribute {a!r} has no observed entries")
        std = float(vals.std())
        if std == 0.0:
            raise ValueError(f"attribute {a!r} has zero observed variance")
        means.append(float(vals.mean()))
        stds.append(std)
    return StandardizationParams(attrs, tuple(means), tuple(stds))


def _axis_labels(given, count, name):
    if given is None:
        return [str(i) for i in range(count)]
    labels = list(given)
    if len(labels) != count:
        raise ValueError(f"need {count} {name} labels, got {len(labels)}")
    return labels


def table_from_matrix(matrix, mask=None, attribute="value", nodes=None, slots=None):
    """Wrap a nodes x slots matrix as a SensorTable.

    Row/column labels default to stringified indices; pass `nodes` and
    `slots` to keep original identifiers.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2:
        raise ValueError("matrix must be 2-dimensional")
    mask = np.ones(matrix.shape, bool) if mask is None else np.asarray(mask, bool)
    nodes = _axis_labels(nodes, matrix.shape[0], "node")
    slots = _axis_labels(slots, matrix.shape[1], "slot") if slots is not None \
        else list(range(matrix.shape[1]))
    records = [
        (str(nodes[i]), int(slots[j]), attribute, float(matrix[i, j]))
        for i, j in zip(*np.nonzero(mask))
    ]
    return SensorTable.from_records(records, attributes=(attribute,))


def table_from_tensor(tensor, mask=None, attributes=None, nodes=None, slots=None):
    """Wrap a (time, node, attribute) tensor as a SensorTable."""
    tensor = np.asarray(tensor, dtype=np.float64)
    if tensor.ndim != 3:
        raise ValueError("tensor must be 3-dimensional")
    k = tensor.shape[2]
    attrs = tuple(attributes) if attributes is not None else tuple(
        f"a{d}" for d in range(k)
    )
    if len(attrs) != k:
        raise ValueError(f"need {k} attribute names, got {len(attrs)}")
    mask = np.ones(tensor.shape, bool) if mask is None else np.asarray(mask, bool)
    nodes = _axis_labels(nodes, tensor.shape[1], "node")
    slots = _axis_labels(slots, tensor.shape[0], "slot") if slots is not None \
        else list(range(tensor.shape[0]))
    records = [
        (str(nodes[n]), int(slots[s]), attrs[d], float(tensor[s, n, d]))
        for s, n, d in zip(*np.nonzero(mask))
    ]
    return SensorTable.from_records(records, attributes=attrs)


def synth_lowrank_matrix(n, t, r, seed=0, noise_sigma=0.0):
    """Rank-r n x t matrix A @ B.T from standard-normal factors, plus noise."""
    if min(n, t) < 1 or r < 1:
        raise ValueError("dimensions and rank must be positive")
    if r > min(n, t):
        raise ValueError(f"rank {r} exceeds min extent {min(n, t)}")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be nonnegative")
    g = _rng(seed)
    a = g.standard_normal((n, r))
    b = g.standard_normal((t, r))
    out = a @ b.T
    if noise_sigma > 0:
        out = out + noise_sigma * g.standard_normal((n, t))
    return out


def _mode_multiply(tensor, matrix, mode):
    shape = list(tensor.shape)
    shape[mode] = matrix.shape[0]
    return fold(matrix @ unfold(tensor, mode), mode, tuple(shape))


def synth_tucker_tensor(shape, ranks, seed=0, noise_sigma=0.0):
    """Tucker tensor: random core times orthonormal factors, plus noise.

    The mode-i unfolding has rank ranks[i] (generically).
    """
    shape = tuple(int(s) for s in shape)
    ranks = tuple(int(r) for r in ranks)
    if len(shape) != len(ranks):
        raise ValueError("shape and ranks must have the same length")
    if any(s < 1 for s in shape) or any(r < 1 for r in ranks):
        raise ValueError("extents and ranks must be positive")
    if any(r > s for r, s in zip(ranks, shape)):
        raise ValueError(f"ranks {ranks} exceed extents {shape}")
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be nonnegative")
    g = _rng(seed)
    out = g.standard_normal(ranks)
    for mode, (ext, r) in enumerate(zip(shape, ranks)):
        q, _ = np.linalg.qr(g.standard_normal((ext, r)))
        out = _mode_multiply(out, q, mode)
    if noise_sigma > 0:
        out = out + noise_sigma * g.standard_normal(shape)
    return out


def synth_mixture_tensor(shape, deficient_mode, r, seed=0):
    """Tensor that is rank-r in `deficient_mode` and full-rank elsewhere.

    A base tensor with extent r along the deficient mode (0-based) is mixed
    through a standard-normal (extent x r) matrix along that mode.
    """
    shape = tuple(int(s) for s in shape)
    if not 0 <= deficient_mode < len(shape):
        raise ValueError(f"deficient_mode {deficient_mode} out of range for {shape}")
    if any(s < 1 for s in shape):
        raise ValueError("extents must be positive")
    if not 1 <= r <= shape[deficient_mode]:
        raise ValueError(f"rank {r} out of range for extent {shape[deficient_mode]}")
    g = _rng(seed)
    base_shape = list(shape)
    base_shape[deficient_mode] = r
    base = g.standard_normal(tuple(base_shape))
    w = g.standard_normal((shape[deficient_mode], r))
    return _mode_multiply(base, w, deficient_mode)


_SYNTH_DIMS = re.compile(r"^\d+(x\d+)+$")


def parse_synth_spec(text):
    """Build a synthetic array from a compact spec string.

    Grammar (keys after the dims may appear in any order)::

        lowrank:NxT:rank=R[:noise=S][:seed=Q]
        tucker:D1xD2x...:ranks=R1,R2,...[:noise=S][:seed=Q]
        mixture:D1xD2x...:mode=M:rank=R[:seed=Q]

    `mode` is 0-based. Tensors are interpreted downstream as
    (time, node, attribute).
    """
    parts = [p.strip() for p in str(text).split(":")]
    if len(parts) < 2:
        raise ValueError(f"invalid synth spec {text!r}")
    kind = parts[0].lower()
    if not _SYNTH_DIMS.match(parts[1]):
        raise ValueError(f"invalid dimensions {parts[1]!r} in synth spec")
    dims = tuple(int(d) for d in parts[1].split("x"))
    opts = {}
    for p in parts[2:]:
        if "=" not in p:
            raise ValueError(f"invalid synth option {p!r}")
        key, _, val = p.partition("=")
        opts[key.strip().lower()] = val.strip()

    def take(key, conv, default=None, required=False):
        if key in opts:
            raw = opts.pop(key)
            try:
                return conv(raw)
            except ValueError:
                raise ValueError(f"invalid {key}={raw!r} in synth spec") from None
        if required:
            raise ValueError(f"synth spec {text!r} requires {key}=")
        return default

    if kind == "lowrank":
        if len(dims) != 2:
            raise ValueError("lowrank takes NxT dimensions")
        rank = take("rank", int, required=True)
        noise = take("noise", float, 0.0)
        seed = take("seed", int, 0)
        out = synth_lowrank_matrix(dims[0], dims[1], rank, seed, noise)
    elif kind == "tucker":
        ranks = take("ranks", lambda v: tuple(int(x) for x in v.split(",")),
                     required=True)
        noise = take("noise", float, 0.0)
        seed = take("seed", int, 0)
        out = synth_tucker_tensor(dims, ranks, seed, noise)
    elif kind == "mixture":
        mode = take("mode", int, required=True)
        rank = take("rank", int, required=True)
        seed = take("seed", int, 0)
        out = synth_mixture_tensor(dims, mode, rank, seed)
    else:
        raise ValueError(f"unknown synth kind {kind!r}")
    if opts:
        raise ValueError(f"unknown synth options {sorted(opts)}")
    return out


def densest_block(completeness, threshold=0.95, min_nodes=2, min_slots=8):
    """Pick a dense nodes x contiguous-slots block from a completeness map.

    Parameters
    ----------
    completeness : 2-D array (nodes x slots)
        Boolean observation mask or per-cell observed fraction in [0, 1].
    threshold : float
        Minimum mean completeness of the returned block.
    min_nodes, min_slots : int
        Smallest acceptable block.

    Returns
    -------
    (ndarray, slice)
        Sorted node row indices and the slot slice. The search is a
        deterministic ladder of window lengths; for each window, nodes are
        ranked by in-window completeness and the largest prefix whose mean
        clears the threshold is scored by node_count * length.

    Raises
    ------
    ValueError
        If no block satisfies the threshold at the minimum size.
    """
    c = np.asarray(completeness, dtype=np.float64)
    if c.ndim != 2:
        raise ValueError("completeness must be 2-dimensional")
    if np.any(c < 0) or np.any(c > 1):
        raise ValueError("completeness values must lie in [0, 1]")
    n, t = c.shape
    min_slots = min(min_slots, t)
    min_nodes = min(min_nodes, n)

    lengths = []
    length = t
    while length >= min_slots:
        lengths.append(length)
        nxt = int(length * 3) // 4
        if nxt == length:
            break
        length = nxt
    if not lengths or lengths[-1] != min_slots:
        lengths.append(min_slots)

    prefix = np.concatenate([np.zeros((n, 1)), np.cumsum(c, axis=1)], axis=1)
    counts = np.arange(1, n + 1)
    best_key = None
    best = None
    for length in lengths:
        stride = max(1, length // 8)
        for start in range(0, t - length + 1, stride):
            per_node = (prefix[:, start + length] - prefix[:, start]) / length
            order = np.argsort(-per_node, kind="stable")
            cum_mean = np.cumsum(per_node[order]) / counts
            ok = np.nonzero(cum_mean >= threshold)[0]
            if ok.size == 0:
                continue
            m = ok[-1] + 1
            if m < min_nodes:
                continue
            key = (m * length, length, -start)
            if best_key is None or key > best_key:
                best_key = key
                best = (np.sort(order[:m]), slice(start, start + length))
    if best is None:
        raise ValueError(
            f"no {min_nodes}x{min_slots} block reaches completeness {threshold}"
        )
    return best

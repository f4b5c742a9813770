"""Small-bias sample spaces over bit strings.

A multiset S of m-bit strings has bias hat_S(alpha) = E_{p in S}[(-1)^<alpha, p>]
at each nonzero alpha; S is delta-biased when every such magnitude is at
most delta.  This module provides explicit constructions (the power
construction over GF(2^m), full spaces, greedy search), set families with
small root-mean-square bias per alpha, exact certification of both by
Walsh-Hadamard transform, and a plain text file format.

Certification is exact: the transform runs on integer-valued counts, so
every intermediate is an integer below 2^53 and the reported biases carry
no rounding beyond the final division.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ResourceLimitError
from .gf2 import Bits, FieldSpec, find_irreducible, nullspace, subgroup_span

AGHP = "AGHP"
EXHAUSTIVE = "EXHAUSTIVE"
FULL_SPACE = "FULL_SPACE"
EXPLICIT_LIST = "EXPLICIT_LIST"

LINEAR_MULTIPLES = "LINEAR_MULTIPLES"
ALL_K_DIM_SPACES = "ALL_K_DIM_SPACES"
SINGLETON_WRAP = "SINGLETON_WRAP"

# largest point table / transform we are willing to materialize
_MAX_POINTS = 1 << 22
_MAX_WHT_BITS = 24


class SmallBiasSet:
    """A multiset of m-bit sample points with a claimed bias bound.

    ``points`` is a 1-D uint64 array (duplicates allowed, order is part of
    the value for reproducibility); ``claimed_bias`` is the bound the
    construction promises; ``tag`` names the construction.
    """

    __slots__ = ("m", "points", "claimed_bias", "tag")

    def __init__(self, m: int, points, claimed_bias: float, tag: str):
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        pts = np.ascontiguousarray(points, dtype=np.uint64)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("points must be a nonempty 1-D array")
        if m < 64 and int(pts.max()) >> m:
            raise ValueError(f"point 0x{int(pts.max()):x} does not fit in {m} bits")
        if not 0.0 <= claimed_bias <= 1.0:
            raise ValueError(f"claimed bias must be in [0,1], got {claimed_bias}")
        self.m = m
        self.points = pts
        self.claimed_bias = float(claimed_bias)
        self.tag = tag

    @property
    def size(self) -> int:
        return int(self.points.size)

    def __repr__(self):
        return (
            f"SmallBiasSet(m={self.m}, size={self.size}, "
            f"claimed_bias={self.claimed_bias:.6g}, tag={self.tag})"
        )


@dataclass(frozen=True)
class BiasReport:
    """Result of exact certification.

    ``max_bias`` is the largest bias magnitude over nonzero alpha,
    ``argmax_alpha`` the smallest alpha attaining it, and ``histogram``
    (optional) counts nonzero-alpha biases in ten equal buckets of [0, 1],
    listed as (bucket upper edge, count).
    """

    max_bias: float
    argmax_alpha: Bits
    histogram: tuple[tuple[float, int], ...] | None = None


def bias_vector(s: SmallBiasSet) -> np.ndarray:
    """All 2^m biases of S, indexed by alpha (signed, bias_vector[0] == 1)."""
    if s.m > _MAX_WHT_BITS:
        raise ResourceLimitError(f"certification over 2^{s.m} strings is not desk scale")
    counts = np.bincount(s.points.astype(np.int64), minlength=1 << s.m).astype(np.float64)
    _kernels.fwht(counts)
    counts /= s.size
    return counts


def _bucketize(mags: np.ndarray) -> tuple[tuple[float, int], ...]:
    edges = np.linspace(0.0, 1.0, 11)
    hist, _ = np.histogram(np.minimum(mags, 1.0), bins=edges)
    return tuple((float(edges[i + 1]), int(hist[i])) for i in range(10))


def certify_bias(s: SmallBiasSet, histogram: bool = False) -> BiasReport:
    """Exact maximum bias over all nonzero alpha, by Walsh-Hadamard transform.

    Ties resolve to the smallest alpha.  The report is exact in the sense
    described in the module docstring.
    """
    mags = np.abs(bias_vector(s))
    rest = mags[1:]
    arg = int(np.argmax(rest)) + 1
    return BiasReport(
        max_bias=float(rest[arg - 1]),
        argmax_alpha=Bits(s.m, arg),
        histogram=_bucketize(rest) if histogram else None,
    )


def aghp_set(n_out: int, field_degree: int) -> SmallBiasSet:
    """Power-construction sample space over GF(2^field_degree).

    One point per pair (x, y) of field elements; bit i of the point is the
    GF(2) inner product <x^i, y>.  For nonzero alpha, the bias equals the
    root fraction of a nonzero polynomial of degree < n_out, so the claimed
    bound is (n_out - 1) / 2^field_degree.
    """
    if n_out < 1 or n_out > 64:
        raise ValueError(f"n_out must be in 1..64, got {n_out}")
    if field_degree < 1:
        raise ValueError(f"field degree must be >= 1, got {field_degree}")
    if (1 << (2 * field_degree)) > _MAX_POINTS:
        raise ResourceLimitError(
            f"2^{2 * field_degree} points is beyond desk scale (limit 2^22)"
        )
    spec = find_irreducible(field_degree)
    pts = _kernels.aghp_points(n_out, field_degree, spec.modulus)
    claimed = min(1.0, (n_out - 1) / (1 << field_degree))
    return SmallBiasSet(n_out, pts, claimed, AGHP)


def full_space_set(m: int) -> SmallBiasSet:
    """All of {0,1}^m once; bias exactly zero at every nonzero alpha."""
    if (1 << m) > _MAX_POINTS:
        raise ResourceLimitError(f"2^{m} points is beyond desk scale")
    return SmallBiasSet(m, np.arange(1 << m, dtype=np.uint64), 0.0, FULL_SPACE)


def explicit_set(m: int, points, claimed_bias: float = 1.0, tag: str = EXPLICIT_LIST) -> SmallBiasSet:
    return SmallBiasSet(m, points, claimed_bias, tag)


def exhaustive_best_set(m: int, size: int, seed: int = 0, restarts: int = 8) -> SmallBiasSet:
    """Greedy search for a low-bias multiset of the given size.

    Maintains the running Walsh sums of the chosen multiset and repeatedly
    adds the point minimizing the resulting worst character sum; several
    seeded restarts keep the best outcome.  Deterministic for a given
    (seed, restarts).  When the size is a multiple of 2^m the full space
    repeated is returned directly (bias exactly zero).  The claimed bias of
    the result is its certified bias.
    """
    if m < 1 or m > 12:
        raise ResourceLimitError(f"search space 2^{m} is out of range (m must be 1..12)")
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    full = 1 << m
    if size % full == 0:
        pts = np.tile(np.arange(full, dtype=np.uint64), size // full)
        return SmallBiasSet(m, pts, 0.0, EXHAUSTIVE)
    # signed character table chi[p, alpha] = (-1)^<alpha, p>
    grid = np.arange(full, dtype=np.uint64)
    par = (np.bitwise_count(grid[:, None] & grid[None, :]) & np.uint8(1)).astype(np.int32)
    chi = 1 - 2 * par
    rng = np.random.default_rng(seed)
    best_pts = None
    best_bias = None
    for _ in range(restarts):
        start = int(rng.integers(full))
        walsh = chi[start].astype(np.int64).copy()
        chosen = [start]
        for _step in range(1, size):
            sums = np.abs(walsh[None, :] + chi)[:, 1:].astype(np.int64)
            # primary score: worst character sum; early on that ties across
            # all candidates, so break by total energy, then seeded choice
            worst = sums.max(axis=1)
            energy = np.square(sums).sum(axis=1)
            energy[worst != worst.min()] = np.iinfo(np.int64).max
            pool = np.flatnonzero(energy == energy.min())
            cand = int(pool[rng.integers(pool.size)])
            chosen.append(cand)
            walsh += chi[cand]
        achieved = int(np.max(np.abs(walsh[1:]))) / size
        if best_bias is None or achieved < best_bias:
            best_bias = achieved
            best_pts = np.array(chosen, dtype=np.uint64)
    return SmallBiasSet(m, best_pts, best_bias, EXHAUSTIVE)


class SetFamily:
    """An indexed family of m-bit point multisets.

    The family promise is on the root-mean-square bias over a uniformly
    random index: for every nonzero alpha,
    sqrt(E_i[hat_S_i(alpha)^2]) <= claimed_bias.

    Kinds:
      LINEAR_MULTIPLES  member a (nonzero field element of GF(2^m)) is
                        {a * kappa : kappa in K} with K the span of the
                        monomials x^0 .. x^(k-1), so K = {0 .. 2^k - 1}.
      ALL_K_DIM_SPACES  every k-dimensional linear subspace of {0,1}^m.
      SINGLETON_WRAP    a single fixed set, wrapped for the family API.
    """

    __slots__ = ("m", "index_size", "claimed_bias", "kind", "field", "k", "_bases", "base")

    def __init__(self, m, index_size, claimed_bias, kind, field=None, k=None, bases=None, base=None):
        self.m = m
        self.index_size = index_size
        self.claimed_bias = claimed_bias
        self.kind = kind
        self.field = field
        self.k = k
        self._bases = bases
        self.base = base

    def member(self, i: int) -> np.ndarray:
        """Points of member i as a uint64 array (fixed enumeration order)."""
        if not 0 <= i < self.index_size:
            raise ValueError(f"index {i} out of range 0..{self.index_size - 1}")
        if self.kind == LINEAR_MULTIPLES:
            a = i + 1
            return np.array(
                [self.field.mul(a, kappa) for kappa in range(1 << self.k)], dtype=np.uint64
            )
        if self.kind == ALL_K_DIM_SPACES:
            span = subgroup_span([Bits(self.m, v) for v in self._bases[i]], width=self.m)
            return np.array([b.value for b in span], dtype=np.uint64)
        return self.base.points

    def members(self):
        for i in range(self.index_size):
            yield self.member(i)

    def __repr__(self):
        return (
            f"SetFamily(kind={self.kind}, m={self.m}, index_size={self.index_size}, "
            f"claimed_bias={self.claimed_bias:.6g})"
        )


def linear_family(n2: int, k: int) -> SetFamily:
    """Family of nonzero multiples of a k-dimensional subspace of GF(2^n2).

    Member a (for each nonzero field element a) is a * K with
    K = {0 .. 2^k - 1}.  Each member is again a k-dimensional subspace, and
    a nonzero alpha lies in the dual of a * K for exactly 2^(n2-k) - 1
    choices of a, giving root-mean-square bias
    sqrt((2^(n2-k) - 1) / (2^n2 - 1)) < 2^(-k/2) at every nonzero alpha.
    """
    if not 1 <= k <= n2:
        raise ValueError(f"need 1 <= k <= n2, got k={k}, n2={n2}")
    if n2 > _MAX_WHT_BITS:
        raise ResourceLimitError(f"family over GF(2^{n2}) is beyond desk scale")
    return SetFamily(
        m=n2,
        index_size=(1 << n2) - 1,
        claimed_bias=2.0 ** (-k / 2),
        kind=LINEAR_MULTIPLES,
        field=find_irreducible(n2),
        k=k,
    )


def singleton_family(s: SmallBiasSet) -> SetFamily:
    return SetFamily(
        m=s.m, index_size=1, claimed_bias=s.claimed_bias, kind=SINGLETON_WRAP, base=s
    )


def _rref_bases(m: int, k: int):
    """All k x m GF(2) matrices in reduced row echelon form of rank k.

    Each matrix is a canonical basis of one k-dimensional subspace, so the
    enumeration lists every subspace exactly once.
    """
    out = []
    for pivots in itertools.combinations(range(m), k):
        free = [
            [c for c in range(pivots[r] + 1, m) if c not in pivots] for r in range(k)
        ]
        nfree = sum(len(f) for f in free)
        for assign in range(1 << nfree):
            rows = []
            pos = 0
            for r in range(k):
                row = 1 << pivots[r]
                for c in free[r]:
                    if (assign >> pos) & 1:
                        row |= 1 << c
                    pos += 1
                rows.append(row)
            out.append(tuple(rows))
    return out


def all_subspaces_family(m: int, k: int) -> SetFamily:
    """Every k-dimensional linear subspace of {0,1}^m as a family member."""
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    if m > 6:
        raise ResourceLimitError("subspace enumeration is limited to m <= 6")
    bases = _rref_bases(m, k)
    return SetFamily(
        m=m,
        index_size=len(bases),
        claimed_bias=2.0 ** (-k / 2),
        kind=ALL_K_DIM_SPACES,
        bases=bases,
    )


def certify_family_bias(f: SetFamily, histogram: bool = False) -> BiasReport:
    """Exact maximum root-mean-square bias of a family over nonzero alpha.

    LINEAR_MULTIPLES members are subspaces, so each per-member bias is the
    0/1 indicator of alpha lying in the member's dual; the mean square is
    counted exactly via the dual spans.  Other kinds accumulate squared
    per-member bias vectors by Walsh-Hadamard transform.
    """
    if f.kind == SINGLETON_WRAP:
        return certify_bias(f.base, histogram=histogram)
    size = 1 << f.m
    if f.kind == LINEAR_MULTIPLES:
        counts = np.zeros(size, dtype=np.int64)
        gens0 = [1 << j for j in range(f.k)]
        for a in range(1, size):
            gens = [f.field.mul(a, g) for g in gens0]
            dual = nullspace(gens, f.m)
            vals = np.zeros(1, dtype=np.int64)
            for b in dual:
                vals = np.concatenate([vals, vals ^ b])
            counts += np.bincount(vals, minlength=size)
        meansq = counts / f.index_size
    else:
        acc = np.zeros(size, dtype=np.float64)
        for pts in f.members():
            c = np.bincount(pts.astype(np.int64), minlength=size).astype(np.float64)
            _kernels.fwht(c)
            c /= pts.size
            acc += c * c
        meansq = acc / f.index_size
    rms = np.sqrt(meansq)
    rest = rms[1:]
    arg = int(np.argmax(rest)) + 1
    return BiasReport(
        max_bias=float(rest[arg - 1]),
        argmax_alpha=Bits(f.m, arg),
        histogram=_bucketize(rest) if histogram else None,
    )


# ---------------------------------------------------------------------------
# file format: "SBSET v1 m=<m> count=<c> bias=<delta>" then one 0x point per line


def write_set(path, s: SmallBiasSet):
    lines = [f"SBSET v1 m={s.m} count={s.size} bias={s.claimed_bias:.17g}"]
    lines.extend(f"0x{int(p):x}" for p in s.points)
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_set(path) -> SmallBiasSet:
    if hasattr(path, "read"):
        text = path.read()
    else:
        with open(path) as fh:
            text = fh.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty set file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "SBSET" or head[1] != "v1":
        raise ValueError(f"bad set header: {lines[0]!r}")
    fields = {}
    for tok in head[2:]:
        key, _, val = tok.partition("=")
        fields[key] = val
    try:
        m = int(fields["m"])
        count = int(fields["count"])
        bias = float(fields["bias"])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad set header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != count:
        raise ValueError(f"expected {count} points, found {len(body)}")
    pts = []
    for ln in body:
        if not ln.startswith("0x"):
            raise ValueError(f"bad point line: {ln!r}")
        pts.append(int(ln, 16))
    return SmallBiasSet(m, np.array(pts, dtype=np.uint64), bias, EXPLICIT_LIST)

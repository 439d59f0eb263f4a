"""Exact brute-force verification of extraction and condensing claims.

Everything here enumerates; nothing samples silently.  Distributions carry
exact rational probabilities, statistical quantities come back as
``Fraction`` values, and every enumeration is bounded by an explicit budget
that raises :class:`BudgetExceededError` instead of degrading.

Side information is classical throughout: a joint table Pr[x, s] stands in
for an encoding of the source, and the optimal guessing strategy is the
pointwise maximum over x for each s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .bits import BitString
from .detrand import CounterRng
from .errors import BudgetExceededError

DEFAULT_ENUM_BUDGET = 1 << 26

_SUM_TOLERANCE = Fraction(1, 1 << 40)

_SOURCE_STREAM_KEY = 0xF1A75EED
_TABLE_STREAM_KEY = 0x70B1E5


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"probability of type {type(value).__name__} not supported")


class FiniteDistribution:
    """A probability distribution over an explicitly enumerated domain."""

    def __init__(self, probs: Mapping[Hashable, Fraction | int | float]):
        converted = {o: _as_fraction(p) for o, p in probs.items()}
        for o, p in converted.items():
            if p < 0:
                raise ValueError(f"negative probability {p} for outcome {o!r}")
        total = sum(converted.values(), Fraction(0))
        if abs(total - 1) > _SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self._probs = converted

    @classmethod
    def uniform(cls, outcomes: Iterable[Hashable]) -> "FiniteDistribution":
        outcomes = list(outcomes)
        if not outcomes:
            raise ValueError("uniform distribution needs a nonempty domain")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError("repeated outcomes")
        p = Fraction(1, len(outcomes))
        return cls({o: p for o in outcomes})

    @classmethod
    def point_mass(cls, outcome: Hashable) -> "FiniteDistribution":
        return cls({outcome: Fraction(1)})

    @classmethod
    def from_counts(
        cls, counts: Mapping[Hashable, int], total: int | None = None
    ) -> "FiniteDistribution":
        if total is None:
            total = sum(counts.values())
        return cls({o: Fraction(c, total) for o, c in counts.items() if c})

    def prob(self, outcome: Hashable) -> Fraction:
        return self._probs.get(outcome, Fraction(0))

    def items(self):
        return self._probs.items()

    def support(self) -> list[Hashable]:
        return [o for o, p in self._probs.items() if p > 0]

    @property
    def max_prob(self) -> Fraction:
        if not self._probs:
            raise ValueError("empty distribution")
        return max(p for p in self._probs.values())

    def map(self, fn: Callable[[Hashable], Hashable]) -> "FiniteDistribution":
        out: dict[Hashable, Fraction] = {}
        for o, p in self._probs.items():
            key = fn(o)
            out[key] = out.get(key, Fraction(0)) + p
        return FiniteDistribution(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteDistribution):
            return NotImplemented
        keys = set(self._probs) | set(other._probs)
        return all(self.prob(k) == other.prob(k) for k in keys)

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self) -> str:
        return f"FiniteDistribution(<{len(self._probs)} outcomes>)"


@dataclass(frozen=True)
class FlatSource:
    """Uniform distribution over a support of exactly 2^k bit strings."""

    n: int
    support: tuple[BitString, ...]

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty support")
        if len(set(self.support)) != len(self.support):
            raise ValueError("repeated support elements")
        if len(self.support) & (len(self.support) - 1):
            raise ValueError(
                f"support size {len(self.support)} is not a power of two"
            )
        for x in self.support:
            if len(x) != self.n:
                raise ValueError(f"support element of length {len(x)}, want {self.n}")

    @classmethod
    def from_ints(cls, n: int, values: Iterable[int]) -> "FlatSource":
        return cls(n, tuple(BitString(v, n) for v in values))

    @property
    def entropy_bits(self) -> int:
        return (len(self.support) - 1).bit_length()

    def distribution(self) -> FiniteDistribution:
        return FiniteDistribution.uniform(self.support)


def sample_flat_sources(
    n: int, k: int, count: int, seed: int = 1
) -> list[FlatSource]:
    """Deterministic pseudorandom flat sources: ``count`` supports of size
    2^k drawn without replacement from {0,1}^n."""
    if k > n:
        raise ValueError(f"cannot place 2^{k} distinct values in {n} bits")
    out = []
    for index in range(count):
        rng = CounterRng(_SOURCE_STREAM_KEY, seed, n, k, index)
        values = rng.sample_distinct(1 << k, 1 << n)
        out.append(FlatSource.from_ints(n, values))
    return out


class JointTable:
    """Finite joint distribution Pr[x, s] of an n-bit source and classical
    side information."""

    def __init__(self, n: int, probs: Mapping[tuple[BitString, Hashable], Fraction]):
        self.n = n
        converted: dict[tuple[BitString, Hashable], Fraction] = {}
        for (x, s), p in probs.items():
            if not isinstance(x, BitString) or len(x) != n:
                raise ValueError(f"source outcome {x!r} is not an {n}-bit string")
            p = _as_fraction(p)
            if p < 0:
                raise ValueError("negative probability")
            if p:
                converted[(x, s)] = p
        total = sum(converted.values(), Fraction(0))
        if abs(total - 1) > _SUM_TOLERANCE:
            raise ValueError(f"joint probabilities sum to {total}, not 1")
        self._probs = converted

    def items(self):
        return self._probs.items()

    def x_marginal(self) -> FiniteDistribution:
        out: dict[BitString, Fraction] = {}
        for (x, _), p in self._probs.items():
            out[x] = out.get(x, Fraction(0)) + p
        return FiniteDistribution(out)

    def side_marginal(self) -> FiniteDistribution:
        out: dict[Hashable, Fraction] = {}
        for (_, s), p in self._probs.items():
            out[s] = out.get(s, Fraction(0)) + p
        return FiniteDistribution(out)

    def alphabet(self) -> list[Hashable]:
        return sorted({s for (_, s) in self._probs}, key=repr)

    def guessing_probability(self) -> Fraction:
        """Optimal probability of guessing x from s: sum_s max_x Pr[x, s]."""
        best: dict[Hashable, Fraction] = {}
        for (x, s), p in self._probs.items():
            if p > best.get(s, Fraction(0)):
                best[s] = p
        return sum(best.values(), Fraction(0))

    def prefix_marginal(self, prefix_bits: int) -> "JointTable":
        """Joint table of (x prefix, s) after dropping the suffix."""
        out: dict[tuple[BitString, Hashable], Fraction] = {}
        for (x, s), p in self._probs.items():
            key = (x[0:prefix_bits], s)
            out[key] = out.get(key, Fraction(0)) + p
        return JointTable(prefix_bits, out)


def min_entropy(dist: FiniteDistribution) -> float:
    """Min-entropy in bits: -log2 of the largest outcome probability."""
    return -math.log2(dist.max_prob)


def cond_min_entropy_classical(table: JointTable) -> float:
    """Conditional min-entropy in bits for classical side information."""
    return -math.log2(table.guessing_probability())


def stat_distance(a: FiniteDistribution, b: FiniteDistribution) -> Fraction:
    """Variational distance (1/2) sum |a - b| over the union of supports."""
    keys = set(dict(a.items())) | set(dict(b.items()))
    total = sum((abs(a.prob(k) - b.prob(k)) for k in keys), Fraction(0))
    return total / 2


def distance_to_min_entropy(dist: FiniteDistribution, kappa: int) -> Fraction:
    """Exact distance to the nearest distribution with min-entropy >= kappa.

    Equals the probability mass exceeding the 2^-kappa cap; the nearest
    capped distribution moves exactly that mass onto fresh outcomes.
    kappa must be an integer so the cap is an exact rational.
    """
    kappa = _as_integer(kappa, "kappa")
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0, got {kappa}")
    cap = Fraction(1, 1 << kappa)
    excess = Fraction(0)
    for _, p in dist.items():
        if p > cap:
            excess += p - cap
    return excess


def _as_integer(value, name: str) -> int:
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise ValueError(f"{name} must be an integer for exact arithmetic, got {value!r}")


def _scatter(pattern: int, positions: Sequence[int]) -> int:
    y = 0
    for k, pos in enumerate(positions):
        y |= ((pattern >> k) & 1) << pos
    return y


def _source_items(source) -> list[tuple[BitString, Fraction]]:
    if isinstance(source, FlatSource):
        return [(x, Fraction(1, len(source.support))) for x in source.support]
    if isinstance(source, FiniteDistribution):
        items = []
        for o, p in source.items():
            if not isinstance(o, BitString):
                raise TypeError("source outcomes must be BitString values")
            if p:
                items.append((o, p))
        return items
    raise TypeError(f"unsupported source type {type(source).__name__}")


def extractor_distance(
    extractor,
    source,
    side: JointTable | None = None,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> Fraction:
    """Exact distance of (seed, output[, side]) from (uniform[, side marginal]).

    ``extractor`` must expose input_bits, seed_bits, output_bits and
    extract(x, y).  If it declares ``seed_support`` (positions the output can
    depend on), enumeration groups seeds by those positions, which is exact
    because seeds outside the support only multiply both sides equally.  A
    vectorized path is used when the extractor provides prepare_batch and
    extract_table and the source is uniform with no side information.
    """
    n = extractor.input_bits
    t = extractor.seed_bits
    m = extractor.output_bits
    items = _source_items(source)
    for x, _ in items:
        if len(x) != n:
            raise ValueError(f"source element of length {len(x)}, extractor wants {n}")
    if side is not None and side.x_marginal() != (
        source.distribution() if isinstance(source, FlatSource) else source
    ):
        raise ValueError("side table's x-marginal differs from the source")

    support_positions = tuple(sorted(getattr(extractor, "seed_support", range(t))))
    if len(set(support_positions)) != len(support_positions) or (
        support_positions and support_positions[-1] >= t
    ):
        raise ValueError("bad seed_support declaration")
    ny = 1 << len(support_positions)
    pairs = len(items) * ny
    if pairs > budget:
        raise BudgetExceededError(pairs, budget, "extractor distance enumeration")

    uniform_source = len({p for _, p in items}) == 1
    if (
        side is None
        and uniform_source
        and hasattr(extractor, "prepare_batch")
        and hasattr(extractor, "extract_table")
        and m <= 24
    ):
        return _distance_table_path(extractor, items, support_positions, m)

    return _distance_scalar_path(extractor, items, side, support_positions, t, m)


def _distance_table_path(extractor, items, positions, m) -> Fraction:
    xs = [x.to_int() for x, _ in items]
    nx = len(xs)
    ny = 1 << len(positions)
    state = extractor.prepare_batch(xs)
    block = max(1, min(ny, (1 << 22) // max(nx, 1)))
    total = 0
    cells = 1 << m
    for start in range(0, ny, block):
        patterns = np.arange(start, min(start + block, ny), dtype=np.int64)
        outputs = np.asarray(extractor.extract_table(state, patterns, positions))
        if cells <= 16:
            for e in range(cells):
                cnt = (outputs == e).sum(axis=1, dtype=np.int64)
                total += int(np.abs(cnt * cells - nx).sum())
        else:
            rows = len(patterns)
            flat = (np.arange(rows, dtype=np.int64)[:, None] << m) | outputs.astype(
                np.int64
            )
            counts = np.bincount(flat.ravel(), minlength=rows * cells)
            total += int(np.abs(counts * cells - nx).sum())
    return Fraction(total, 2 * ny * nx * cells)


def _distance_scalar_path(extractor, items, side, positions, t, m) -> Fraction:
    ny = 1 << len(positions)
    cells = Fraction(1, 1 << m)
    if side is None:
        side_items = None
        target_side = None
    else:
        side_items = list(side.items())
        target_side = side.side_marginal()

    total = Fraction(0)
    for pattern in range(ny):
        y = BitString(_scatter(pattern, positions), t)
        acc: dict = {}
        if side_items is None:
            for x, px in items:
                e = extractor.extract(x, y).to_int()
                acc[e] = acc.get(e, Fraction(0)) + px
            observed = Fraction(0)
            for e, p in acc.items():
                total += abs(p - cells)
                observed += cells
            total += 1 - observed
        else:
            for (x, s), pxs in side_items:
                e = extractor.extract(x, y).to_int()
                key = (e, s)
                acc[key] = acc.get(key, Fraction(0)) + pxs
            observed = Fraction(0)
            for (e, s), p in acc.items():
                q = cells * target_side.prob(s)
                total += abs(p - q)
                observed += q
            total += 1 - observed
    return total / (2 * ny)


def injective_fraction(
    cprime,
    source: FlatSource,
    seed_bits: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
    image_table: np.ndarray | None = None,
) -> Fraction:
    """Fraction of (x, y) pairs whose image under the strong-form map has a
    unique preimage in support x seeds.

    ``cprime`` maps (x: BitString, y: BitString) to a BitString.  An optional
    precomputed ``image_table`` (shape (support, 2^seed_bits), any integer
    encoding of images) accelerates the count; a deterministic spot check
    confirms the table against ``cprime`` before it is trusted.
    """
    nx = len(source.support)
    ny = 1 << seed_bits
    pairs = nx * ny
    if pairs > budget:
        raise BudgetExceededError(pairs, budget, "injectivity enumeration")

    if image_table is not None:
        table = np.asarray(image_table)
        if table.shape != (nx, ny):
            raise ValueError(f"image table shape {table.shape}, want {(nx, ny)}")
        rng = CounterRng(_TABLE_STREAM_KEY, nx, ny)
        for _ in range(min(32, pairs)):
            i = rng.below(nx)
            y = rng.below(ny)
            img = cprime(source.support[i], BitString(y, seed_bits)).to_int()
            if int(table[i, y]) != img:
                raise ValueError("image table disagrees with the map")
        values, counts = np.unique(table.ravel(), return_counts=True)
        unique_pairs = int(counts[counts == 1].sum())
        return Fraction(unique_pairs, pairs)

    counts: dict = {}
    images = []
    for x in source.support:
        for yv in range(ny):
            img = cprime(x, BitString(yv, seed_bits)).to_int()
            images.append(img)
            counts[img] = counts.get(img, 0) + 1
    unique_pairs = sum(1 for img in images if counts[img] == 1)
    return Fraction(unique_pairs, pairs)


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    passed: bool
    note: str = ""

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "slack": str(self.slack),
            "passed": self.passed,
            "note": self.note,
        }


@dataclass(frozen=True)
class LemmaSuiteReport:
    checks: tuple[LemmaCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "allPassed": self.all_passed,
            "checks": [c.to_json_dict() for c in self.checks],
        }


def flat_decomposition(
    dist: FiniteDistribution,
) -> list[tuple[Fraction, tuple[Hashable, ...]]]:
    """Write a distribution as a convex combination of uniform distributions.

    Outcomes sorted by decreasing probability; level i contributes weight
    i * (p_i - p_(i+1)) on the top-i outcomes.  Weights are exact and sum
    to one.
    """
    ordered = sorted(dist.items(), key=lambda op: (-op[1], repr(op[0])))
    out = []
    for i in range(1, len(ordered) + 1):
        p_here = ordered[i - 1][1]
        p_next = ordered[i][1] if i < len(ordered) else Fraction(0)
        weight = i * (p_here - p_next)
        if weight:
            out.append((weight, tuple(o for o, _ in ordered[:i])))
    return out


def lemma_suite(
    table: JointTable,
    prefix_bits: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> LemmaSuiteReport:
    """Exact checks of the entropy bookkeeping facts for classical side
    information, with x split as (prefix, suffix) at ``prefix_bits``.

    All inequalities are evaluated in the guessing-probability domain, where
    every quantity is an exact rational.
    """
    if not 0 <= prefix_bits <= table.n:
        raise ValueError(f"prefix length {prefix_bits} outside [0, {table.n}]")
    suffix_bits = table.n - prefix_bits
    checks: list[LemmaCheck] = []

    guess_full = table.guessing_probability()
    x_marginal = table.x_marginal()

    # Bounded storage: side information over an alphabet of size A cannot
    # raise the guessing probability by more than a factor A.
    alphabet_size = len(table.alphabet())
    checks.append(
        LemmaCheck(
            name="storage_bound",
            lhs=guess_full,
            rhs=alphabet_size * x_marginal.max_prob,
            passed=guess_full <= alphabet_size * x_marginal.max_prob,
            note=f"alphabet size {alphabet_size}",
        )
    )

    # Cutting the suffix costs at most 2^suffix in guessing probability.
    prefix_table = table.prefix_marginal(prefix_bits)
    guess_prefix = prefix_table.guessing_probability()
    checks.append(
        LemmaCheck(
            name="suffix_cut",
            lhs=guess_prefix,
            rhs=(1 << suffix_bits) * guess_full,
            passed=guess_prefix <= (1 << suffix_bits) * guess_full,
            note=f"suffix of {suffix_bits} bits",
        )
    )

    # Mass of prefixes whose conditional guessing probability is at least v
    # is bounded by 2^prefix * guess_full / v, for every threshold v.
    prefix_mass: dict[BitString, Fraction] = {}
    cond_best: dict[tuple[BitString, Hashable], Fraction] = {}
    for (x, s), p in table.items():
        x1 = x[0:prefix_bits]
        prefix_mass[x1] = prefix_mass.get(x1, Fraction(0)) + p
        key = (x1, s)
        if p > cond_best.get(key, Fraction(0)):
            cond_best[key] = p
    cond_guess: dict[BitString, Fraction] = {}
    for (x1, _), p in cond_best.items():
        cond_guess[x1] = cond_guess.get(x1, Fraction(0)) + p
    # cond_guess[x1] currently holds sum_s max_x2 Pr[x1, x2, s]; divide by
    # the prefix mass to condition on X1 = x1.
    worst = None
    for x1 in cond_guess:
        cond_guess[x1] /= prefix_mass[x1]
    for v in sorted(set(cond_guess.values()), reverse=True):
        bad_mass = sum(
            (prefix_mass[x1] for x1, g in cond_guess.items() if g >= v),
            Fraction(0),
        )
        lhs = bad_mass * v
        rhs = (1 << prefix_bits) * guess_full
        if worst is None or rhs - lhs < worst.rhs - worst.lhs:
            worst = LemmaCheck(
                name="bad_prefix_mass",
                lhs=lhs,
                rhs=rhs,
                passed=lhs <= rhs,
                note=f"tightest threshold v={v}",
            )
        if lhs > rhs:
            worst = LemmaCheck("bad_prefix_mass", lhs, rhs, False, f"violated at v={v}")
            break
    if worst is None:
        worst = LemmaCheck("bad_prefix_mass", Fraction(0), Fraction(0), True, "empty")
    checks.append(worst)

    # Convexity: extraction distance of a mixture of uniform pieces is at
    # most the weighted sum of the pieces' distances.
    from .toeplitz import ToeplitzExtractor, ToeplitzSpec

    n = table.n
    m = max(1, min(2, n - 1)) if n > 1 else 1
    ext = ToeplitzExtractor(ToeplitzSpec(n, m))
    mixture = x_marginal
    lhs_total = extractor_distance(ext, mixture, budget=budget)
    rhs_total = Fraction(0)
    for weight, outcomes in flat_decomposition(mixture):
        piece = FiniteDistribution.uniform(outcomes)
        rhs_total += weight * extractor_distance(ext, piece, budget=budget)
    checks.append(
        LemmaCheck(
            name="mixture_convexity",
            lhs=lhs_total,
            rhs=rhs_total,
            passed=lhs_total <= rhs_total,
            note=f"toeplitz probe n={n} m={m}",
        )
    )

    return LemmaSuiteReport(tuple(checks))


def sample_joint_table(
    n: int, alphabet_size: int, seed: int = 1, index: int = 0
) -> JointTable:
    """Deterministic pseudorandom joint table over {0,1}^n x alphabet."""
    rng = CounterRng(_TABLE_STREAM_KEY, seed, n, alphabet_size, index)
    weights = []
    for x in range(1 << n):
        for s in range(alphabet_size):
            weights.append(rng.below(1 << 16))
    total = sum(weights)
    if total == 0:
        weights[0] = 1
        total = 1
    probs = {}
    i = 0
    for x in range(1 << n):
        for s in range(alphabet_size):
            if weights[i]:
                probs[(BitString(x, n), s)] = Fraction(weights[i], total)
            i += 1
    return JointTable(n, probs)

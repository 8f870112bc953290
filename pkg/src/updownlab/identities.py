"""Declarative corpus of series identities and lattice-sum instances.

The corpus ships as a JSON file: every record stores exact algebraic data
(QuadraticNumber coefficients, CM points, discriminants), and the verifier
recomputes both sides of each equality to a requested precision, reporting
the absolute residual.
"""

from __future__ import annotations

import fnmatch
import json
import os
import re
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpf

from .numerics import DomainError, PrecisionContext, QuadraticNumber, embed_quadratic
from .lfunctions import Discriminant, dirichlet_l2
from .epstein import epstein_sl2
from .modular import CMPoint
from .series import (
    FibLucasSeries,
    SeriesFamily,
    UpsideDownSeries,
    evaluate_fib_series,
    evaluate_updown,
)


class CorpusError(ValueError):
    """The corpus file violates the documented schema."""


_L_TAG_RE = re.compile(r"^L\((-?\d+)\)$")
_SIMPLE_TAGS = ("PI2", "ZETA2", "ZETA3")


def _check_tag(tag: str) -> str:
    if tag in _SIMPLE_TAGS:
        return tag
    m = _L_TAG_RE.match(tag)
    if not m:
        raise CorpusError(f"unknown constant tag {tag!r}")
    Discriminant(int(m.group(1)))
    return tag


@dataclass(frozen=True)
class SeriesTerm:
    """One weighted series on the left-hand side of an identity."""

    weight: QuadraticNumber
    series: Union[UpsideDownSeries, FibLucasSeries]


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    source: str
    lhs: Tuple[SeriesTerm, ...]
    rhs: Tuple[Tuple[QuadraticNumber, str], ...]

    def __post_init__(self) -> None:
        if not self.rhs:
            raise CorpusError(f"record {self.id!r} has empty rhs")
        for _, tag in self.rhs:
            _check_tag(tag)


@dataclass(frozen=True)
class KroneckerInstance:
    id: str
    points: Tuple[CMPoint, ...]
    signs: Tuple[int, ...]
    twist: Fraction
    d1: Discriminant
    d2: Discriminant
    kind: str  # KRONECKER or DIRICHLET

    def __post_init__(self) -> None:
        if len(self.points) != len(self.signs):
            raise CorpusError(f"instance {self.id!r}: points/signs length mismatch")
        if any(s not in (1, -1) for s in self.signs):
            raise CorpusError(f"instance {self.id!r}: signs must be +-1")
        if self.kind not in ("KRONECKER", "DIRICHLET"):
            raise CorpusError(f"instance {self.id!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class VerificationReport:
    id: str
    digits: int
    lhs_value: mpf
    rhs_value: mpf
    abs_residual: mpf
    passed: bool
    terms_used: int
    elapsed_ms: float


@dataclass(frozen=True)
class Corpus:
    identities: Tuple[IdentityRecord, ...]
    kronecker: Tuple[KroneckerInstance, ...]

    def identity(self, record_id: str) -> IdentityRecord:
        for rec in self.identities:
            if rec.id == record_id:
                return rec
        raise KeyError(f"no identity record with id {record_id!r}")

    def instance(self, instance_id: str) -> KroneckerInstance:
        for inst in self.kronecker:
            if inst.id == instance_id:
                return inst
        raise KeyError(f"no lattice-sum instance with id {instance_id!r}")


# -- JSON (de)serialization ------------------------------------------------

def _quad_to_json(q: QuadraticNumber) -> dict:
    return {
        "a": [q.a.numerator, q.a.denominator],
        "b": [q.b.numerator, q.b.denominator],
        "D": q.D,
    }


def _quad_from_json(obj, where: str) -> QuadraticNumber:
    try:
        a = Fraction(obj["a"][0], obj["a"][1])
        b = Fraction(obj["b"][0], obj["b"][1])
        return QuadraticNumber(a, b, int(obj["D"]))
    except (KeyError, TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise CorpusError(f"{where}: bad quadratic number {obj!r}: {exc}") from None


def _frac_to_json(x: Fraction) -> list:
    return [x.numerator, x.denominator]


def _frac_from_json(obj, where: str) -> Fraction:
    try:
        return Fraction(obj[0], obj[1])
    except (TypeError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise CorpusError(f"{where}: bad rational {obj!r}: {exc}") from None


def _term_to_json(term: SeriesTerm) -> dict:
    s = term.series
    if isinstance(s, UpsideDownSeries):
        body = {
            "kind": "updown",
            "family": s.family.tag,
            "a": _quad_to_json(s.a),
            "b": _quad_to_json(s.b),
            "m": _quad_to_json(s.m),
        }
    else:
        body = {
            "kind": "fiblucas",
            "p": _frac_to_json(s.p),
            "q": _frac_to_json(s.q),
            "r": _frac_to_json(s.r),
            "s": _frac_to_json(s.s),
            "t": _frac_to_json(s.t),
            "u": _frac_to_json(s.u),
        }
    return {"weight": _quad_to_json(term.weight), **body}


def _term_from_json(obj, where: str) -> SeriesTerm:
    weight = _quad_from_json(obj.get("weight"), where)
    kind = obj.get("kind")
    if kind == "updown":
        families = {f.tag: f for f in SeriesFamily}
        if obj.get("family") not in families:
            raise CorpusError(f"{where}: unknown family {obj.get('family')!r}")
        series = UpsideDownSeries(
            families[obj["family"]],
            _quad_from_json(obj.get("a"), where),
            _quad_from_json(obj.get("b"), where),
            _quad_from_json(obj.get("m"), where),
        )
    elif kind == "fiblucas":
        series = FibLucasSeries(*(
            _frac_from_json(obj.get(f), where) for f in "pqrstu"
        ))
    else:
        raise CorpusError(f"{where}: unknown series kind {kind!r}")
    return SeriesTerm(weight, series)


def _record_from_json(obj, index: int) -> IdentityRecord:
    where = f"identities[{index}]"
    if not isinstance(obj.get("id"), str) or not obj["id"]:
        raise CorpusError(f"{where}: missing id")
    where = f"identities[{index}] ({obj['id']})"
    lhs = tuple(
        _term_from_json(t, where) for t in obj.get("lhs", [])
    )
    if not lhs:
        raise CorpusError(f"{where}: empty lhs")
    rhs = []
    for entry in obj.get("rhs", []):
        coeff = _quad_from_json(entry.get("coeff"), where)
        tag = entry.get("tag")
        if not isinstance(tag, str):
            raise CorpusError(f"{where}: missing rhs tag")
        try:
            _check_tag(tag)
        except (CorpusError, DomainError) as exc:
            raise CorpusError(f"{where}: {exc}") from None
        rhs.append((coeff, tag))
    return IdentityRecord(obj["id"], obj.get("source", ""), lhs, tuple(rhs))


def _instance_from_json(obj, index: int) -> KroneckerInstance:
    where = f"kronecker[{index}]"
    if not isinstance(obj.get("id"), str) or not obj["id"]:
        raise CorpusError(f"{where}: missing id")
    where = f"kronecker[{index}] ({obj['id']})"
    try:
        points = tuple(CMPoint.from_string(s) for s in obj.get("points", []))
    except DomainError as exc:
        raise CorpusError(f"{where}: {exc}") from None
    signs = tuple(obj.get("signs", []))
    try:
        d1 = Discriminant(int(obj["d1"]))
        d2 = Discriminant(int(obj["d2"]))
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise CorpusError(f"{where}: bad discriminant: {exc}") from None
    return KroneckerInstance(
        obj["id"], points, signs,
        _frac_from_json(obj.get("twist", [1, 1]), where),
        d1, d2, obj.get("kind", "KRONECKER"),
    )


def corpus_from_json(text: str) -> Corpus:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise CorpusError("top level must be an object")
    identities = tuple(
        _record_from_json(o, i) for i, o in enumerate(data.get("identities", []))
    )
    kronecker = tuple(
        _instance_from_json(o, i) for i, o in enumerate(data.get("kronecker", []))
    )
    ids = [r.id for r in identities] + [k.id for k in kronecker]
    if len(set(ids)) != len(ids):
        dupes = sorted({x for x in ids if ids.count(x) > 1})
        raise CorpusError(f"duplicate ids: {dupes}")
    return Corpus(identities, kronecker)


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical JSON text; load/serialize round-trips byte for byte."""
    data = {
        "identities": [
            {
                "id": r.id,
                "source": r.source,
                "lhs": [_term_to_json(t) for t in r.lhs],
                "rhs": [
                    {"coeff": _quad_to_json(c), "tag": tag} for c, tag in r.rhs
                ],
            }
            for r in corpus.identities
        ],
        "kronecker": [
            {
                "id": k.id,
                "points": [_point_string(p) for p in k.points],
                "signs": list(k.signs),
                "twist": _frac_to_json(k.twist),
                "d1": k.d1.d,
                "d2": k.d2.d,
                "kind": k.kind,
            }
            for k in corpus.kronecker
        ],
    }
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _point_string(p: CMPoint) -> str:
    """Render a CM point in the grammar accepted by CMPoint.from_string."""
    x = Fraction(-p.B, 2 * p.A)
    y_sq = Fraction(-p.disc, 4 * p.A * p.A)
    # Split y_sq = r^2 * rad with rad squarefree-ish (largest square factor out).
    num, den = y_sq.numerator, y_sq.denominator
    rad = num * den
    r = Fraction(1, den)
    f = 2
    while f * f <= rad:
        while rad % (f * f) == 0:
            rad //= f * f
            r *= f
        f += 1
    if x == 0:
        if rad == 1:
            return f"{r}*i" if r != 1 else "i"
        return f"{r}*sqrt({rad})*i"
    return f"{x}+{r}*sqrt({rad})*i"


_DEFAULT_CORPUS = "data/corpus.json"


def load_corpus(path: Optional[str] = None) -> Corpus:
    """Load and validate a corpus; defaults to the file shipped in the package."""
    if path is None:
        text = resources.files(__package__).joinpath(_DEFAULT_CORPUS).read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return corpus_from_json(text)


# -- constants cache -------------------------------------------------------

class ConstantsCache:
    """Decimal strings for RHS constants, keyed by (tag, digits)."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._data = {}
        if path and os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    self._data = json.load(fh)
            except (OSError, json.JSONDecodeError):
                self._data = {}

    def get(self, tag: str, digits: int) -> Optional[str]:
        return self._data.get(f"{tag}@{digits}")

    def put(self, tag: str, digits: int, value: str) -> None:
        self._data[f"{tag}@{digits}"] = value
        if self.path:
            tmp = self.path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(self._data, fh, indent=2, sort_keys=True)
            os.replace(tmp, self.path)


def constant_value(tag: str, ctx: PrecisionContext,
                   cache: Optional[ConstantsCache] = None) -> mpf:
    """Value of a RHS constant tag, via the cache when possible."""
    from .numerics import zeta_int

    _check_tag(tag)
    with ctx.working():
        if cache is not None:
            hit = cache.get(tag, ctx.digits)
            if hit is not None:
                return mpf(hit)
        if tag == "PI2":
            value = mp.pi**2
        elif tag == "ZETA2":
            value = zeta_int(2, ctx)
        elif tag == "ZETA3":
            value = zeta_int(3, ctx)
        else:
            value = dirichlet_l2(int(_L_TAG_RE.match(tag).group(1)), ctx)
        if cache is not None:
            cache.put(tag, ctx.digits, mpmath.nstr(
                value, ctx.digits, strip_zeros=False))
        return value


# -- verification ----------------------------------------------------------

def _rhs_value(rhs, ctx: PrecisionContext, cache=None) -> mpf:
    with ctx.working():
        total = mpf(0)
        for coeff, tag in rhs:
            total += embed_quadratic(coeff, ctx) * constant_value(tag, ctx, cache)
        return total


def _report(record_id, ctx, lhs, rhs, terms, t0) -> VerificationReport:
    with ctx.working():
        residual = abs(lhs - rhs)
        passed = bool(residual < mpf(10) ** (-(ctx.digits - 5)))
    return VerificationReport(
        id=record_id, digits=ctx.digits, lhs_value=lhs, rhs_value=rhs,
        abs_residual=residual, passed=passed, terms_used=terms,
        elapsed_ms=(time.monotonic() - t0) * 1000.0,
    )


def verify_identity(record: Union[str, IdentityRecord], ctx: PrecisionContext,
                    corpus: Optional[Corpus] = None,
                    cache: Optional[ConstantsCache] = None) -> VerificationReport:
    if isinstance(record, str):
        corpus = corpus if corpus is not None else load_corpus()
        record = corpus.identity(record)
    t0 = time.monotonic()
    with ctx.working():
        lhs = mpf(0)
        counter = []
        for term in record.lhs:
            w = embed_quadratic(term.weight, ctx)
            if isinstance(term.series, UpsideDownSeries):
                lhs += w * evaluate_updown(term.series, ctx, counter)
            else:
                lhs += w * evaluate_fib_series(term.series, ctx, counter)
        rhs = _rhs_value(record.rhs, ctx, cache)
    return _report(record.id, ctx, lhs, rhs, sum(counter), t0)


def verify_kronecker(instance: Union[str, KroneckerInstance],
                     ctx: PrecisionContext,
                     corpus: Optional[Corpus] = None,
                     cache: Optional[ConstantsCache] = None) -> VerificationReport:
    if isinstance(instance, str):
        corpus = corpus if corpus is not None else load_corpus()
        instance = corpus.instance(instance)
    t0 = time.monotonic()
    with ctx.working():
        lhs = mpf(0)
        for point, sign in zip(instance.points, instance.signs):
            lhs += sign * epstein_sl2(point.to_point(ctx), ctx)
        from .numerics import zeta_int

        four_zeta4 = 4 * zeta_int(4, ctx)
        twist = mpf(instance.twist.numerator) / instance.twist.denominator
        d1, d2 = instance.d1.d, instance.d2.d
        if instance.kind == "KRONECKER":
            rhs = -twist * d1 * d2 * dirichlet_l2(d1, ctx) \
                * dirichlet_l2(d2, ctx) / four_zeta4
        else:
            rhs = -twist * d1 * d2 * zeta_int(2, ctx) \
                * dirichlet_l2(d1 * d2, ctx) / four_zeta4
        if not instance.points:
            rhs = mpf(0)
    return _report(instance.id, ctx, lhs, rhs, len(instance.points), t0)


def verify_all(ctx: PrecisionContext, pattern: Optional[str] = None,
               corpus: Optional[Corpus] = None,
               cache: Optional[ConstantsCache] = None,
               parallelism: int = 1) -> Sequence[VerificationReport]:
    """Verify every matching record and instance, in ascending id order."""
    corpus = corpus if corpus is not None else load_corpus()
    work = [("identity", r) for r in corpus.identities]
    work += [("kronecker", k) for k in corpus.kronecker]
    if pattern is not None:
        work = [w for w in work if fnmatch.fnmatchcase(w[1].id, pattern)]
    work.sort(key=lambda w: w[1].id)

    def run(item):
        kind, rec = item
        if kind == "identity":
            return verify_identity(rec, ctx, corpus, cache)
        return verify_kronecker(rec, ctx, corpus, cache)

    if parallelism > 1 and len(work) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(run, work))
    else:
        reports = [run(item) for item in work]
    return reports

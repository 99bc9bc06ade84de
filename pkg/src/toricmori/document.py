"""JSON interchange format for fans with named divisors.

Rationals travel as strings ``"p/q"`` in lowest terms (integers as ``"p/1"``);
no floating point is ever written or accepted.
"""

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .divisor import TorusDivisor, canonical_divisor, prime_divisor
from .errors import ToricError
from .fan import Fan
from .lattice import is_primitive


class DocumentError(ToricError):
    pass


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text, strict=True):
    if isinstance(text, bool):
        raise DocumentError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise DocumentError(f"not a rational: {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise DocumentError(f"not a rational: {text!r}")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q == 0:
        raise DocumentError(f"zero denominator in {text!r}")
    value = Fraction(p, q)
    if strict and m.group(2) is not None and value.denominator != q:
        raise DocumentError(f"rational {text!r} is not in lowest terms")
    return value


def _plain(value):
    """Metadata values made JSON-safe with exact rationals as strings."""
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if isinstance(value, Fan):
        return fan_payload(value)
    return value


def fan_payload(F):
    return {
        "rank": F.rank,
        "rays": [list(r) for r in F.rays],
        "max_cones": [list(c) for c in F.max_cones],
    }


@dataclass
class FanDocument:
    fan: Fan
    divisors: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_json(self):
        payload = fan_payload(self.fan)
        payload["divisors"] = {
            name: [format_rational(c) for c in D] for name, D in sorted(self.divisors.items())
        }
        payload["metadata"] = _plain(self.metadata)
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from None
        return cls.from_payload(payload)

    @classmethod
    def from_payload(cls, payload):
        if not isinstance(payload, dict):
            raise DocumentError("document must be a JSON object")
        F = fan_from_payload(payload)
        divisors = {}
        for name, coeffs in (payload.get("divisors") or {}).items():
            if not isinstance(coeffs, list) or len(coeffs) != F.n_rays:
                raise DocumentError(f"divisor {name!r} must list one rational per ray")
            divisors[name] = TorusDivisor(parse_rational(c) for c in coeffs)
        meta = payload.get("metadata") or {}
        if not isinstance(meta, dict):
            raise DocumentError("metadata must be an object")
        return cls(F, divisors, meta)

    def related_fans(self):
        out = {}
        for name, p in (self.metadata.get("related") or {}).items():
            out[name] = fan_from_payload(p)
        return out


def fan_from_payload(payload):
    for key in ("rank", "rays", "max_cones"):
        if key not in payload:
            raise DocumentError(f"missing field {key!r}")
    rank = payload["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
        raise DocumentError("rank must be a nonnegative integer")
    rays = payload["rays"]
    if not isinstance(rays, list):
        raise DocumentError("rays must be a list")
    for i, r in enumerate(rays):
        if not isinstance(r, list) or len(r) != rank or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in r
        ):
            raise DocumentError(f"ray {i} must be a list of {rank} integers")
        if not is_primitive(r):
            raise DocumentError(f"ray {i} is not primitive")
    cones = payload["max_cones"]
    if not isinstance(cones, list):
        raise DocumentError("max_cones must be a list")
    for c in cones:
        if not isinstance(c, list) or not all(isinstance(i, int) and 0 <= i < len(rays) for i in c):
            raise DocumentError(f"cone {c!r} has an index out of range")
    return Fan(rays, cones, rank=rank)


def example_document(ex):
    """Document for an :class:`~toricmori.constructions.Example`."""
    meta = {"example": ex.name, "params": ex.params}
    if ex.ample:
        meta["ample"] = ex.ample
    if ex.expected:
        meta["expected"] = ex.expected
    if ex.notes:
        meta["notes"] = ex.notes
    if ex.related:
        meta["related"] = ex.related
    return FanDocument(ex.fan, dict(ex.divisors), meta)


# ---------------------------------------------------------------------------
# divisor expressions

_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z][A-Za-z0-9_]*)\s*"
)


def parse_divisor(expr, F, named=None):
    """Evaluate ``"K + 2*D"``, ``"D_3"``, ``"1/2 E - D0"`` or a comma list of coefficients."""
    named = dict(named or {})
    text = expr.strip()
    if "," in text or _RATIONAL.match(text):
        parts = [p for p in text.split(",")]
        if len(parts) != F.n_rays:
            raise DocumentError(f"coefficient list needs {F.n_rays} entries")
        return TorusDivisor(parse_rational(p.strip(), strict=False) for p in parts)
    total = TorusDivisor([0] * F.n_rays)
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and not m.group(1)):
            raise DocumentError(f"cannot parse divisor expression {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = parse_rational(m.group(2), strict=False) if m.group(2) else Fraction(1)
        total = total + _named_divisor(m.group(3), F, named) * (sign * coeff)
        pos = m.end()
        first = False
    return total


def _named_divisor(name, F, named):
    if name in named:
        return named[name]
    if name == "K":
        return canonical_divisor(F)
    m = re.fullmatch(r"D_?(\d+)", name)
    if m:
        i = int(m.group(1))
        if i >= F.n_rays:
            raise DocumentError(f"no ray {i}")
        return prime_divisor(F, i)
    raise DocumentError(f"unknown divisor {name!r}")

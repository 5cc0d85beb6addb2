"""Literal value semantics for FILTER comparisons and ORDER BY."""
from __future__ import annotations

import re
from datetime import datetime
from fractions import Fraction

from ..rdf.terms import RDF_LANGSTRING, XSD, XSD_STRING, BlankNode, Iri, Literal, Term, term_kind_rank

NUMERIC_TYPES = {
    XSD + name
    for name in (
        "integer", "decimal", "double", "float", "int", "long", "short", "byte", "nonNegativeInteger",
        "positiveInteger", "negativeInteger", "nonPositiveInteger", "unsignedInt", "unsignedLong",
        "unsignedShort", "unsignedByte",
    )
}
DURATION_TYPES = {XSD + "duration", XSD + "yearMonthDuration", XSD + "dayTimeDuration"}

_DURATION = re.compile(
    r"^(-)?P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+(?:\.\d+)?)S)?)?$"
)


class EvaluationError(Exception):
    """A comparison that has no defined result; the solution is eliminated."""


def numeric_value(lit: Literal) -> Fraction:
    text = lit.lexical.strip()
    if lit.datatype in (XSD + "double", XSD + "float"):
        if text in ("NaN", "INF", "-INF", "+INF"):
            raise EvaluationError(f"non-finite {text}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise EvaluationError(f"ill-typed numeric literal {lit.lexical!r}") from None


def duration_value(lit: Literal) -> tuple[int, Fraction]:
    """(months, seconds) of an xsd:duration lexical form."""
    m = _DURATION.match(lit.lexical.strip())
    if not m or lit.lexical.strip() in ("P", "-P") or lit.lexical.strip().endswith("T"):
        raise EvaluationError(f"ill-typed duration {lit.lexical!r}")
    sign = -1 if m.group(1) else 1
    y, mo, d, h, mi = (int(g or 0) for g in m.group(2, 3, 4, 5, 6))
    s = Fraction(m.group(7) or 0)
    return sign * (12 * y + mo), sign * (((d * 24 + h) * 60 + mi) * 60 + s)


def _datetime_value(lit: Literal) -> datetime:
    text = lit.lexical.strip().replace("Z", "+00:00")
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        raise EvaluationError(f"ill-typed dateTime {lit.lexical!r}") from None


_OPS = {
    "=": lambda c: c == 0,
    "!=": lambda c: c != 0,
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    ">": lambda c: c > 0,
    ">=": lambda c: c >= 0,
}


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def compare(op: str, left: Term, right: Term) -> bool:
    """Evaluate ``left op right``; raises EvaluationError on a type error."""
    if op not in _OPS:
        raise EvaluationError(f"unknown operator {op}")
    if isinstance(left, (Iri, BlankNode)) or isinstance(right, (Iri, BlankNode)):
        if op not in ("=", "!="):
            raise EvaluationError("IRIs and blank nodes only support = and !=")
        return (left == right) == (op == "=")
    assert isinstance(left, Literal) and isinstance(right, Literal)
    ld, rd = left.datatype, right.datatype
    if ld in NUMERIC_TYPES and rd in NUMERIC_TYPES:
        return _OPS[op](_cmp(numeric_value(left), numeric_value(right)))
    if ld == XSD_STRING and rd == XSD_STRING:
        return _OPS[op](_cmp(left.lexical, right.lexical))
    if ld == RDF_LANGSTRING and rd == RDF_LANGSTRING:
        if left.language.lower() != right.language.lower():
            if op in ("=", "!="):
                return op == "!="
            raise EvaluationError("language tags differ")
        return _OPS[op](_cmp(left.lexical, right.lexical))
    if ld == XSD + "boolean" and rd == XSD + "boolean":
        lv, rv = (_bool(x) for x in (left, right))
        return _OPS[op](_cmp(lv, rv))
    if ld == XSD + "dateTime" and rd == XSD + "dateTime":
        try:
            return _OPS[op](_cmp(_datetime_value(left), _datetime_value(right)))
        except TypeError:
            raise EvaluationError("naive and timezoned dateTimes are incomparable") from None
    if ld in DURATION_TYPES and rd in DURATION_TYPES:
        lm, ls = duration_value(left)
        rm, rs = duration_value(right)
        if lm == 0 and rm == 0:
            return _OPS[op](_cmp(ls, rs))
        if ls == 0 and rs == 0:
            return _OPS[op](_cmp(lm, rm))
        if op in ("=", "!="):
            # equality is component-wise, so P1M != P30D
            return ((lm, ls) == (rm, rs)) == (op == "=")
        raise EvaluationError("durations mixing months and seconds are incomparable")
    if ld == rd:
        # unknown datatype: only term identity is defined
        if op in ("=", "!="):
            if left.lexical == right.lexical:
                return op == "="
            raise EvaluationError(f"cannot decide equality for datatype {ld}")
    raise EvaluationError(f"incompatible types {ld} and {rd}")


def _bool(lit: Literal) -> bool:
    if lit.lexical in ("true", "1"):
        return True
    if lit.lexical in ("false", "0"):
        return False
    raise EvaluationError(f"ill-typed boolean {lit.lexical!r}")


def order_key(term: Term | None) -> tuple:
    """Total order: unbound < blank < IRI < literal (numeric, then string, then other)."""
    rank = term_kind_rank(term)
    if term is None:
        return (rank,)
    if isinstance(term, BlankNode):
        return (rank, term.label)
    if isinstance(term, Iri):
        return (rank, term.value)
    if term.datatype in NUMERIC_TYPES:
        try:
            return (rank, 0, numeric_value(term), term.lexical, term.datatype)
        except EvaluationError:
            pass
    if term.datatype in (XSD_STRING, RDF_LANGSTRING):
        return (rank, 1, term.lexical, term.language or "")
    return (rank, 2, term.lexical, term.datatype)

"""Parser for the function-spec mini language.

    moebius:A=<r>,B=<r>[,conv=BA|AB]
    binpow:B=<r>,lam=<c>
    expline:C=<c>
    spiralpow:p=<n>,a=<c>,b=<c>,alpha=<r>,lam=<r>
    poly:p=<n>;a<k>=<c>;...

Complex literals are ``<re>``, ``<im>i`` or ``<re>+<im>i`` / ``<re>-<im>i``
with no spaces.  Every failure is a :class:`ParseError` carrying the line and
column (both 1-based) and what was expected there.
"""

from __future__ import annotations

import re
import warnings

from .errors import ExponentOutsideRoysterRegion, ParameterError, ParseError
from .zoo import (
    AnalyticMap,
    PValentFunction,
    make_binomial_power,
    make_exp_line,
    make_moebius,
    make_pvalent,
    make_spiral_power,
)

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(r"[+-]?" + _NUM)
_INT = re.compile(r"\d+")
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

# family -> ordered (key, kind) pairs; kinds: r real, c complex, n integer, conv
_FAMILIES = {
    "moebius": (("A", "r"), ("B", "r"), ("conv", "conv")),
    "binpow": (("B", "r"), ("lam", "c")),
    "expline": (("C", "c"),),
    "spiralpow": (("p", "n"), ("a", "c"), ("b", "c"), ("alpha", "r"), ("lam", "r")),
}
_OPTIONAL = {"conv"}


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        return line, col

    def fail(self, expected: str, pos: int | None = None) -> ParseError:
        line, col = self.where(pos)
        return ParseError(line, col, expected, self.text)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if not self.at_end() else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.fail(repr(ch))
        self.pos += 1

    def match(self, pattern: re.Pattern, expected: str) -> str:
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.fail(expected)
        self.pos = m.end()
        return m.group(0)

    def real(self) -> float:
        return float(self.match(_REAL, "a real number"))

    def integer(self) -> int:
        return int(self.match(_INT, "a non-negative integer"))

    def complex_(self) -> complex:
        first = self.real()
        if self.peek() == "i":
            self.pos += 1
            return complex(0.0, first)
        if self.peek() and self.peek() in "+-":
            start = self.pos
            m = _REAL.match(self.text, self.pos)
            if not m or m.group(0)[0] not in "+-":
                raise self.fail("an imaginary part like +0.5i", start)
            self.pos = m.end()
            if self.peek() != "i":
                raise self.fail("'i' after the imaginary part")
            self.pos += 1
            return complex(first, float(m.group(0)))
        return complex(first, 0.0)


def _value(sc: _Scanner, kind: str):
    if kind == "r":
        return sc.real()
    if kind == "c":
        return sc.complex_()
    if kind == "n":
        return sc.integer()
    word = sc.match(_IDENT, "BA or AB")
    if word not in ("BA", "AB"):
        raise sc.fail("BA or AB", sc.pos - len(word))
    return "B<A" if word == "BA" else "A<B"


def _keyed_list(sc: _Scanner, family: str) -> dict:
    spec = dict(_FAMILIES[family])
    got: dict = {}
    while True:
        start = sc.pos
        key = sc.match(_IDENT, "a parameter name (" + ", ".join(spec) + ")")
        if key not in spec:
            raise sc.fail("one of " + ", ".join(spec), start)
        if key in got:
            raise sc.fail(f"a parameter other than repeated {key}", start)
        sc.expect("=")
        got[key] = _value(sc, spec[key])
        if sc.at_end():
            break
        sc.expect(",")
    missing = [k for k in spec if k not in got and k not in _OPTIONAL]
    if missing:
        raise sc.fail("parameter " + ", ".join(missing))
    return got


def _poly(sc: _Scanner) -> PValentFunction:
    start = sc.pos
    key = sc.match(_IDENT, "p=<n>")
    if key != "p":
        raise sc.fail("p=<n>", start)
    sc.expect("=")
    p_pos = sc.pos
    p = sc.integer()
    if p < 1:
        raise sc.fail("a positive valence p", p_pos)
    tail = {}
    while not sc.at_end():
        sc.expect(";")
        k_pos = sc.pos
        sc.expect("a")
        k = sc.integer()
        if k < p + 1:
            raise sc.fail(f"a coefficient index >= {p + 1}", k_pos)
        if k in tail:
            raise sc.fail(f"a coefficient other than repeated a{k}", k_pos)
        sc.expect("=")
        tail[k] = sc.complex_()
    return PValentFunction(p, tail)


def parse_function_spec(text: str) -> AnalyticMap | PValentFunction:
    """Parse a function spec; ``poly`` gives a :class:`PValentFunction`."""
    if not isinstance(text, str):
        raise ParseError(1, 1, "a string", repr(text))
    sc = _Scanner(text)
    fam_pos = sc.pos
    m = _IDENT.match(text)
    family = m.group(0) if m else ""
    if family not in _FAMILIES and family != "poly":
        raise sc.fail("a family (moebius, binpow, expline, spiralpow, poly)", fam_pos)
    sc.pos = m.end()
    sc.expect(":")
    args_pos = sc.pos
    if family == "poly":
        return _poly(sc)
    prm = _keyed_list(sc, family)
    try:
        if family == "moebius":
            return make_moebius(prm["A"], prm["B"], prm.get("conv", "B<A"))
        if family == "binpow":
            return make_binomial_power(prm["B"], prm["lam"])
        if family == "expline":
            return make_exp_line(prm["C"])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExponentOutsideRoysterRegion)
            return make_spiral_power(prm["p"], prm["a"], prm["b"], prm["alpha"], prm["lam"])
    except ParameterError as exc:
        raise sc.fail(f"parameters in range ({exc})", args_pos) from exc


def parse_map(text: str) -> AnalyticMap:
    """Like :func:`parse_function_spec` but always returns an evaluable map."""
    out = parse_function_spec(text)
    return make_pvalent(out) if isinstance(out, PValentFunction) else out


def parse_complex(text: str) -> complex:
    """A single complex literal such as ``1``, ``-0.5i`` or ``0.3+0.1i``."""
    sc = _Scanner(text)
    value = sc.complex_()
    if not sc.at_end():
        raise sc.fail("end of the number")
    return value

"""Independent re-verification of certificates.

Nothing here imports the producing modules. Polynomials are parsed from
their text form, brackets are evaluated straight from the structure
constants, and every rank or solve is a fresh elimination over Fractions
(or Gaussian rationals, kept as ``(re, im)`` pairs). Payloads are trusted
for nothing except as claims to be recomputed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from pathlib import Path

from .certificate import Certificate, Kind, digest_of
from .errors import CertificateFailure, ParseError

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass
class Verification:
    kind: str
    checks: list[str] = field(default_factory=list)

    def note(self, msg: str) -> None:
        self.checks.append(msg)


def _fail(step: str, detail: str):
    raise CertificateFailure(step, detail)


def _need(cond: bool, step: str, detail: str) -> None:
    if not cond:
        _fail(step, detail)


# ---------------------------------------------------------------------------
# algebra


class _Alg:
    def __init__(self, data: dict):
        n = int(data["dim"])
        self.n = n
        self.c: dict[tuple[int, int], dict[int, Fraction]] = {}
        for br in data.get("brackets", []):
            i, j = int(br["i"]) - 1, int(br["j"]) - 1
            if not (0 <= i < j < n):
                _fail("algebra", f"bracket entry ({i + 1},{j + 1}) must satisfy 1 <= i < j <= dim")
            row = {int(co["k"]) - 1: Fraction(str(co["v"])) for co in br["coeffs"]}
            row = {k: v for k, v in row.items() if v}
            self.c[(i, j)] = row
            self.c[(j, i)] = {k: -v for k, v in row.items()}
        self.blocks = [[x - 1 for x in b] for b in data.get("su2_blocks", [])]

    def const(self, i, j, k) -> Fraction:
        return self.c.get((i, j), {}).get(k, F0)

    def jacobi(self) -> None:
        n = self.n
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        s = F0
                        for m in range(n):
                            s += self.const(i, j, m) * self.const(m, k, l)
                            s += self.const(j, k, m) * self.const(m, i, l)
                            s += self.const(k, i, m) * self.const(m, j, l)
                        if s:
                            _fail("lie-algebra-axioms",
                                  f"Jacobi fails at ({i + 1},{j + 1},{k + 1},{l + 1}), residual {s}")

    def vbracket(self, x, y) -> list[Fraction]:
        out = [F0] * self.n
        for (i, j), row in self.c.items():
            if x[i] and y[j]:
                for k, v in row.items():
                    out[k] += x[i] * y[j] * v
        return out

    def killing(self) -> list[list[Fraction]]:
        n = self.n
        return [[sum((self.const(i, m, k) * self.const(j, k, m) for m in range(n) for k in range(n)), F0)
                 for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# polynomials as {exponent tuple: Fraction}

_TOKEN = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?((?:\s*x\d+(?:\^\d+)?)*)\s*")
_VAR = re.compile(r"x(\d+)(?:\^(\d+))?")


def parse_poly(s: str, n: int) -> dict:
    s = s.strip()
    out: dict = {}
    if s == "0":
        return out
    pos = 0
    first = True
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3).strip()):
            _fail("payload", f"unparseable polynomial {s!r}")
        if not first and not m.group(1):
            _fail("payload", f"missing sign in {s!r}")
        first = False
        c = Fraction(m.group(2)) if m.group(2) else F1
        if m.group(1) == "-":
            c = -c
        e = [0] * n
        for v in _VAR.finditer(m.group(3)):
            i = int(v.group(1)) - 1
            if not 0 <= i < n:
                _fail("payload", f"variable x{i + 1} out of range")
            e[i] += int(v.group(2) or 1)
        e = tuple(e)
        out[e] = out.get(e, F0) + c
        if not out[e]:
            del out[e]
        pos = m.end()
    return out


def parse_mono(s: str, n: int) -> tuple:
    if s.strip() == "1":
        return (0,) * n
    p = parse_poly(s, n)
    if len(p) != 1 or next(iter(p.values())) != 1:
        _fail("payload", f"{s!r} is not a monomial")
    return next(iter(p))


def padd(p: dict, q: dict, a=F1) -> dict:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, F0) + a * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            v = out.get(e, F0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e)
    return out


def pdiff(p: dict, i: int) -> dict:
    out = {}
    for e, c in p.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = c * e[i]
    return out


def pdeg(p: dict) -> int:
    return max((sum(e) for e in p), default=-1)


class _Ctx:
    """Algebra plus optional substitution rules."""

    def __init__(self, payload: dict):
        self.alg = _Alg(payload["algebra"])
        self.alg.jacobi()
        n = self.alg.n
        self.n = n
        self.rules: list[tuple[tuple, dict]] = []
        rels = []
        ideal = payload.get("ideal")
        for rel in (ideal or {}).get("relations", []):
            p = parse_poly(rel["poly"], n)
            lead = tuple(int(x) for x in rel["lead"])
            key = lambda e: (sum(e), e)  # noqa: E731
            _need(lead in p and all(key(e) < key(lead) for e in p if e != lead),
                  "ideal", f"relation {rel['poly']!r}: lead is not its graded-lex maximum")
            lc = p[lead]
            self.rules.append((lead, {e: -c / lc for e, c in p.items() if e != lead}))
            rels.append(p)
        self._nf: dict = {}
        self._xs = [{tuple(int(i == k) for i in range(n)): F1} for k in range(n)]
        for rel in rels:
            for x in self._xs:
                _need(not self.bracket(rel, x), "ideal",
                      "relation does not Poisson-commute with the coordinates")

    def normal(self, e: tuple) -> bool:
        return not any(all(a >= b for a, b in zip(e, lead)) for lead, _ in self.rules)

    def _reduce_mono(self, e: tuple) -> dict:
        hit = self._nf.get(e)
        if hit is not None:
            return hit
        out = {e: F1}
        for lead, tail in self.rules:
            if all(a >= b for a, b in zip(e, lead)):
                rest = tuple(a - b for a, b in zip(e, lead))
                out = {}
                for te, tc in tail.items():
                    out = padd(out, self._reduce_mono(tuple(a + b for a, b in zip(rest, te))), tc)
                break
        self._nf[e] = out
        return out

    def reduce(self, p: dict) -> dict:
        if not self.rules:
            return p
        out: dict = {}
        for e, c in p.items():
            out = padd(out, self._reduce_mono(e), c)
        return out

    def bracket(self, f: dict, g: dict) -> dict:
        n = self.n
        df = [pdiff(f, i) for i in range(n)]
        dg = [pdiff(g, j) for j in range(n)]
        out: dict = {}
        for (i, j), row in self.alg.c.items():
            if not df[i] or not dg[j]:
                continue
            prod = pmul(df[i], dg[j])
            for k, v in row.items():
                out = padd(out, pmul(prod, self._xs[k]), v)
        return self.reduce(out)

    def laplacian(self, f: dict) -> dict:
        out: dict = {}
        for x in self._xs:
            out = padd(out, self.bracket(x, self.bracket(x, f)), -1)
        return out

    def monomials(self, k: int) -> list[tuple]:
        out = []
        for d in range(k + 1):
            for combo in combinations_with_replacement(range(self.n), d):
                e = [0] * self.n
                for i in combo:
                    e[i] += 1
                e = tuple(e)
                if self.normal(e):
                    out.append(e)
        return out

    def poly(self, s: str) -> dict:
        return self.reduce(parse_poly(s, self.n))


# ---------------------------------------------------------------------------
# elimination


def _rank(rows: list[dict]) -> int:
    """Rank of sparse rows ``{col: value}`` over any exact field."""
    pivots: dict = {}
    r = 0
    for row in rows:
        row = {k: v for k, v in row.items() if v}
        while row:
            c = min(row)
            if c not in pivots:
                inv = 1 / row[c]
                pivots[c] = {k: v * inv for k, v in row.items()}
                r += 1
                break
            f = row[c]
            for k, v in pivots[c].items():
                s = row.get(k, 0) - f * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
    return r


def _minors(m: list[list[Fraction]]) -> list[Fraction]:
    """Leading principal minors by Gaussian elimination without pivoting
    (when a minor vanishes, the later ones are recomputed directly)."""
    n = len(m)
    out = []
    for k in range(1, n + 1):
        a = [list(r[:k]) for r in m[:k]]
        d = F1
        for i in range(k):
            p = next((r for r in range(i, k) if a[r][i]), None)
            if p is None:
                d = F0
                break
            if p != i:
                a[i], a[p] = a[p], a[i]
                d = -d
            d *= a[i][i]
            for r in range(i + 1, k):
                f = a[r][i] / a[i][i]
                if f:
                    for cc in range(i, k):
                        a[r][cc] -= f * a[i][cc]
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# mean witnesses


def _mean(ctx: _Ctx, witness: dict, need_cap: int, v: Verification) -> dict:
    """Check ``m(1) = 1``, ``m o Lap = 0`` and uniqueness on ``P^cap``."""
    cap = int(witness["cap"])
    _need(cap >= need_cap, "mean", f"mean witness covers degree {cap}, need {need_cap}")
    mons = ctx.monomials(cap)
    vals = {parse_mono(s, ctx.n): Fraction(x) for s, x in witness["values"].items()}
    _need(set(vals) == set(mons), "mean", "mean witness is not indexed by the normal monomials")
    one = (0,) * ctx.n
    _need(vals[one] == 1, "mean", "mean(1) != 1")
    idx = {e: i for i, e in enumerate(mons)}
    cols = []
    for e in mons:
        lap = ctx.laplacian({e: F1})
        _need(all(x in idx for x in lap), "mean", "Laplacian leaves the degree-capped space")
        s = sum((c * vals[x] for x, c in lap.items()), F0)
        _need(s == 0, "mean", f"mean does not vanish on Lap({_mtext(e)})")
        cols.append({idx[x]: c for x, c in lap.items()})
    r = _rank(cols)
    _need(r == len(mons) - 1, "mean",
          f"Laplacian has rank {r} on a {len(mons)}-dimensional space; the mean is not unique")
    v.note(f"mean functional verified on degree <= {cap} (dim {len(mons)}, Laplacian rank {r})")
    return vals


def _apply_mean(vals: dict, p: dict) -> Fraction:
    try:
        return sum((c * vals[e] for e, c in p.items()), F0)
    except KeyError as exc:
        _fail("mean", f"monomial {exc} outside the mean witness")


def _mtext(e: tuple) -> str:
    return " ".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a) or "1"


# ---------------------------------------------------------------------------
# per-kind checks


def _check_derived_ideal(p: dict, v: Verification) -> None:
    ctx = _Ctx(p)
    k = int(p["k"])
    mons = ctx.monomials(k)
    basis = [parse_mono(s, ctx.n) for s in p["basis"]]
    _need(sorted(basis) == sorted(mons) and len(basis) == len(mons), "derived-ideal",
          "basis is not the set of normal monomials of degree <= k")
    dim = len(basis)
    idx = {e: i for i, e in enumerate(basis)}
    lap = [[Fraction(x) for x in row] for row in p["laplacian"]]
    for c, e in enumerate(basis):
        img = ctx.laplacian({e: F1})
        col = [F0] * dim
        for x, cf in img.items():
            _need(x in idx, "derived-ideal", f"Lap({_mtext(e)}) leaves P^{k}")
            col[idx[x]] = cf
        _need([lap[r][c] for r in range(dim)] == col, "derived-ideal",
              f"Laplacian column for {_mtext(e)} does not match bracket evaluation")
    v.note("Laplacian matrix recomputed from brackets")
    one = idx[(0,) * ctx.n]
    m = [Fraction(x) for x in p["mean_vector"]]
    _need(m[one] == 1, "derived-ideal", "m(1) != 1")
    for c in range(dim):
        _need(sum(m[r] * lap[r][c] for r in range(dim)) == 0, "derived-ideal",
              "mean vector does not annihilate the image")
    _need(not any(lap[r][one] for r in range(dim)), "derived-ideal", "Lap(1) != 0")
    pre = {int(x["target"]): [Fraction(y) for y in x["g"]] for x in p["preimages"]}
    _need(set(pre) == set(range(dim)) - {one}, "derived-ideal", "preimages must cover every nonconstant basis element")
    for a, g in pre.items():
        img = [sum(lap[r][c] * g[c] for c in range(dim)) for r in range(dim)]
        want = [F0] * dim
        want[a] = F1
        want[one] -= m[a]
        _need(img == want, "derived-ideal", f"Lap(g) != e - mean(e) for {_mtext(basis[a])}")
    _need(int(p["rank"]) == dim - 1, "derived-ideal", "claimed rank is not dim - 1")
    v.note(f"rank(Lap|P^{k}) = {dim - 1} of {dim}: {dim - 1} preimages and a nonzero annihilating functional")
    v.note("kernel = constants; constants not in the image (m(1) = 1, m o Lap = 0)")


def _check_bracket_decomposition(p: dict, v: Verification) -> None:
    ctx = _Ctx(p)
    f = ctx.poly(p["f"])
    total: dict = {}
    for u, w in p["pairs"]:
        total = padd(total, ctx.bracket(ctx.poly(u), ctx.poly(w)))
    _need(not padd(total, f, -1), "bracket-decomposition", "sum of brackets differs from f")
    if p.get("g") is not None:
        g = ctx.poly(p["g"])
        _need(not padd(ctx.laplacian(g), f, -1), "bracket-decomposition", "Lap(g) != f")
    v.note(f"sum of {len(p['pairs'])} brackets equals f exactly")


def _check_gram(p: dict, v: Verification) -> None:
    ctx = _Ctx(p)
    k = int(p["k"])
    vecs = [ctx.poly(s) for s in p["vectors"]]
    _need(all(pdeg(x) <= k for x in vecs), "gram-positivity", "vector outside P^k")
    vals = _mean(ctx, p["mean"], 2 * k, v)
    rows = [{e: c for e, c in x.items()} for x in vecs]
    _need(_rank([dict(enumerate(_coord(r, ctx.monomials(k)))) for r in rows]) == len(vecs),
          "gram-positivity", "vectors are linearly dependent")
    g = [[_apply_mean(vals, ctx.reduce(pmul(a, b))) for b in vecs] for a in vecs]
    claimed = [[Fraction(x) for x in r] for r in p["gram"]]
    _need(g == claimed, "gram-positivity", "Gram matrix does not match recomputed means")
    minors = _minors(g)
    _need([str(x) for x in minors] == list(p["minors"]), "gram-positivity", "claimed minors differ")
    bad = next((i for i, x in enumerate(minors) if x <= 0), None)
    _need(bad is None, "gram-positivity", f"leading minor {bad and bad + 1} is not positive")
    v.note(f"{len(minors)} leading principal minors recomputed, all > 0")


def _coord(p: dict, mons: list) -> list:
    idx = {e: i for i, e in enumerate(mons)}
    out = [F0] * len(mons)
    for e, c in p.items():
        out[idx[e]] = c
    return out


def _check_ad_invariance(p: dict, v: Verification) -> None:
    ctx = _Ctx(p)
    k = int(p["k"])
    vals = _mean(ctx, p["mean"], max(3 * k - 1, 0), v)
    els = [{e: F1} for e in ctx.monomials(k)]
    br = {(a, b): ctx.bracket(els[a], els[b]) for a in range(len(els)) for b in range(len(els))}
    worst = F0
    for a in range(len(els)):
        for b in range(len(els)):
            for c in range(len(els)):
                r = _apply_mean(vals, ctx.reduce(pmul(br[a, b], els[c]))) + \
                    _apply_mean(vals, ctx.reduce(pmul(els[b], br[a, c])))
                worst = max(worst, abs(r))
    _need(worst == 0, "ad-invariance", f"nonzero residual {worst}")
    _need(Fraction(p["max_residual"]) == 0, "ad-invariance", "certificate records a nonzero residual")
    v.note(f"<{{f,g}},h> + <g,{{f,h}}> = 0 on all {len(els) ** 3} basis triples (trilinear, so on all of P^{k})")


def _check_minimality(p: dict, v: Verification) -> None:
    alg = _Alg(p["algebra"])
    alg.jacobi()
    n = alg.n
    h = [Fraction(x) for x in p["h"]]
    _need(any(h), "minimality", "h = 0")
    ad_rank = _rank([dict(enumerate(alg.vbracket(h, [F1 if i == j else F0 for i in range(n)])))
                     for j in range(n)])
    gens = [alg.vbracket(h, [Fraction(x) for x in w]) for w in p["preimages"]]
    _need(_rank([dict(enumerate(g)) for g in gens]) == len(gens) == ad_rank, "minimality",
          "preimages do not give a basis of [b, h]")
    for a, b in p["steps"]:
        _need(0 <= a < len(gens) and 0 <= b < len(gens), "minimality", "step refers to a later generator")
        gens.append(alg.vbracket(gens[a], gens[b]))
    r = _rank([dict(enumerate(g)) for g in gens])
    _need(r == n, "minimality", f"closure spans only {r} of {n} dimensions")
    chain = [int(x) for x in p["rank_chain"]]
    _need(chain[0] == ad_rank and chain[-1] == n and chain == sorted(chain), "minimality", "bad rank chain")
    v.note(f"[b, h] (dim {ad_rank}) generates all {n} dimensions via {len(p['steps'])} brackets")


def _check_conclusion(p: dict, v: Verification, siblings: dict | None) -> None:
    alg = _Alg(p["algebra"])
    alg.jacobi()
    v.note("antisymmetry and Jacobi hold")
    kil = alg.killing()
    minors = _minors(kil)
    _need(all(m != 0 for m in minors[-1:]), "semisimple", "Killing form is degenerate")
    _need(all((m < 0) if i % 2 == 0 else (m > 0) for i, m in enumerate(minors)), "compact-type",
          "Killing form is not negative definite")
    _need([str(x) for x in minors] == list(p["killing_minors"]), "compact-type", "claimed minors differ")
    n = alg.n
    rows = [{j: alg.const(i, j, k) for j in range(n)} for i in range(n) for k in range(n)]
    _need(_rank(rows) == n, "zero-center", "center is nonzero")
    v.note("Killing form negative definite and nondegenerate, center zero")
    for kind, dg in p["certificates"].items():
        if siblings is not None:
            _need(dg in siblings, "conclusion", f"{kind} certificate with digest {dg[:12]} not found")
            _need(siblings[dg].kind.value == kind, "conclusion", f"digest {dg[:12]} is not a {kind}")
    if siblings is not None:
        v.note(f"{len(p['certificates'])} referenced certificates present and verified")


def _check_trivial_preq(p: dict, v: Verification) -> None:
    ctx = _Ctx(p)
    k = int(p["k"])
    vals = _mean(ctx, p["mean"], max(2 * k - 1, k), v)
    mons = ctx.monomials(k)
    q = {parse_mono(s, ctx.n): Fraction(x) for s, x in p["values"].items()}
    _need(set(q) == set(mons), "trivial-prequantization", "values not indexed by the basis")
    _need(q[(0,) * ctx.n] == 1, "trivial-prequantization", "Q(1) != 1")
    for e in mons:
        _need(q[e] == vals[e], "trivial-prequantization", f"Q({_mtext(e)}) is not the mean")
    pairs = 0
    for a in range(len(mons)):
        for b in range(a + 1, len(mons)):
            br = ctx.bracket({mons[a]: F1}, {mons[b]: F1})
            _need(_apply_mean(vals, br) == 0, "trivial-prequantization",
                  f"Q({{{_mtext(mons[a])},{_mtext(mons[b])}}}) != 0")
            pairs += 1
    v.note(f"Q(1) = 1 and Q({{f,g}}) = 0 = [Q(f),Q(g)] on all {pairs} basis pairs of P^{k}")


# ---------------------------------------------------------------------------
# Gaussian rationals as (re, im) pairs, and Q(i)[u]/(m)


def _g(s: str) -> tuple:
    s = s.replace(" ", "")
    if not s.endswith("i"):
        return (Fraction(s), F0)
    body = s[:-1]
    cut = max(body.rfind("+", 1), body.rfind("-", 1))
    while cut > 0 and body[cut - 1] in "eE":
        cut = max(body.rfind("+", 1, cut), body.rfind("-", 1, cut))
    if cut <= 0:
        im = body
        return (F0, Fraction(im) if im not in ("", "+", "-") else Fraction(f"{im}1"))
    re_, im = body[:cut], body[cut:]
    return (Fraction(re_), Fraction(im) if im not in ("+", "-") else Fraction(f"{im}1"))


def _gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _gsub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gdiv(a, b):
    d = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / d, (a[1] * b[0] - a[0] * b[1]) / d)


G0 = (F0, F0)
G1 = (F1, F0)


class _GField:
    """Field ops for elimination over Q(i) on pair tuples."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __bool__(self):
        return self.v != G0

    def __mul__(self, o):
        return _GField(_gmul(self.v, o.v))

    def __rmul__(self, o):
        return self * o

    def __sub__(self, o):
        if isinstance(o, int) and o == 0:
            return self
        return _GField(_gsub(self.v, o.v))

    def __rsub__(self, o):
        return _GField(_gsub(G0, self.v))

    def __rtruediv__(self, o):
        return _GField(_gdiv(G1, self.v))


class _Ext:
    """Arithmetic in Q(i)[u]/(m); ``m`` monic, coefficients low to high."""

    def __init__(self, modulus):
        self.m = modulus
        self.deg = 1 if modulus is None else len(modulus) - 1

    def norm(self, a: list) -> list:
        a = list(a) + [G0] * max(0, self.deg - len(a))
        if self.m is not None:
            while len(a) > self.deg:
                top = a.pop()
                if top != G0:
                    base = len(a) - self.deg
                    for i in range(self.deg):
                        a[base + i] = _gsub(a[base + i], _gmul(top, self.m[i]))
        elif len(a) > 1:
            _need(all(x == G0 for x in a[1:]), "feasibility", "base-field entry has u-terms")
            a = a[:1]
        return a

    def add(self, a, b):
        return self.norm([_gadd(x, y) for x, y in zip(self.norm(a), self.norm(b))])

    def sub(self, a, b):
        return self.norm([_gsub(x, y) for x, y in zip(self.norm(a), self.norm(b))])

    def mul(self, a, b):
        out = [G0] * (len(a) + len(b))
        for i, x in enumerate(a):
            if x != G0:
                for j, y in enumerate(b):
                    out[i + j] = _gadd(out[i + j], _gmul(x, y))
        return self.norm(out)

    def scal(self, c, a):
        return self.norm([_gmul(c, x) for x in a])

    def zero(self, a) -> bool:
        return all(x == G0 for x in self.norm(a))


def _mat_ext(ext: _Ext, m) -> list:
    return [[ext.norm([_g(s) for s in e]) for e in row] for row in m]


def _commutator(ext: _Ext, a, b):
    n = len(a)
    out = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = ext.norm([])
            for s in range(n):
                acc = ext.add(acc, ext.mul(a[r][s], b[s][c]))
                acc = ext.sub(acc, ext.mul(b[r][s], a[s][c]))
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# feasibility verdicts


def _spin_images(j: Fraction, scale: Fraction) -> list:
    """Scaled spin images from the ladder in the rescaled weight basis."""
    N = int(2 * j) + 1
    ms = [j - a for a in range(N)]
    jp = [[F0] * N for _ in range(N)]
    jm = [[F0] * N for _ in range(N)]
    for a, m in enumerate(ms):
        if a + 1 < N:
            jm[a + 1][a] = F1
            jp[a][a + 1] = (j + m) * (j - m + 1)
    x = [[(F0, -(jp[r][c] + jm[r][c]) / 2 * scale) for c in range(N)] for r in range(N)]
    y = [[(-(jp[r][c] - jm[r][c]) / 2 * scale, F0) for c in range(N)] for r in range(N)]
    z = [[(F0, -ms[r] * scale if r == c else F0) for c in range(N)] for r in range(N)]
    return [x, y, z]


def _check_feasibility(p: dict, v: Verification) -> None:
    ctx = _Ctx({"algebra": p["algebra"],
                "ideal": None})
    _need(ctx.n == 3 and ctx.alg.const(0, 1, 2) == 1 and ctx.alg.const(1, 2, 0) == 1
          and ctx.alg.const(2, 0, 1) == 1, "feasibility", "algebra is not su(2) in the epsilon basis")
    r = Fraction(p["radius"])
    _need(r > 0, "feasibility", "radius must be positive")
    ctx = _Ctx({"algebra": p["algebra"], "ideal": {"relations": [
        {"poly": f"x1^2 + x2^2 + x3^2 - {r * r}", "lead": [2, 0, 0]}]}})
    j = Fraction(p["j"])
    N = int(p["N"])
    k = int(p["k_domain"])
    _need(N == 2 * j + 1 and k in (2, 3), "feasibility", "inconsistent j, N or k_domain")
    scale = Fraction(p["fixed_images"]["scale"])
    base = _Ext(None)
    fixed = [_mat_ext(base, [[[s] for s in row] for row in m]) for m in p["fixed_images"]["matrices"]]
    ref = _spin_images(j, scale)
    _need(all(fixed[a][rr][c] == [ref[a][rr][c]] for a in range(3) for rr in range(N) for c in range(N)),
          "feasibility", "fixed images are not the scaled spin-j generators")
    unscale = (F1 / scale, F0)
    fixed = [[[base.scal(unscale, e) for e in row] for row in m] for m in fixed]
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        _need(_commutator(base, fixed[a], fixed[b]) == fixed[c], "feasibility",
              f"[Q(x{a + 1}), Q(x{b + 1})] != Q(x{c + 1})")
    v.note(f"fixed images satisfy the su(2) relations (scale {scale} undone)")

    # domain basis: 1, x1, x2, x3, then listed harmonics
    n = 3
    one = {(0, 0, 0): F1}
    fixed_polys = [one] + [{tuple(int(i == a) for i in range(n)): F1} for a in range(n)]
    free_polys, degs = [], []
    for item in p["free_basis"]:
        f = ctx.poly(item["poly"])
        l = int(item["degree"])
        _need(2 <= l <= k and pdeg(f) == l, "feasibility", f"harmonic {item['poly']!r} has wrong degree")
        lap = ctx.laplacian(f)
        _need(not padd(lap, f, -l * (l + 1)), "feasibility", f"{item['poly']!r} is not a degree-{l} harmonic")
        free_polys.append(f)
        degs.append(l)
    domain = fixed_polys + free_polys
    mons = ctx.monomials(k)
    _need(len(domain) == len(mons) and _rank([dict(enumerate(_coord(f, mons))) for f in domain]) == len(mons),
          "feasibility", "domain elements are not a basis of P^k")
    v.note(f"domain: 1, x1..x3 and {len(free_polys)} harmonics, a basis of P^{k} (dim {len(mons)})")
    nf = 4
    coords_of = _expander(domain, mons)

    pairs = []
    for a in range(len(domain)):
        for b in range(a + 1, len(domain)):
            br = ctx.bracket(domain[a], domain[b])
            if pdeg(br) <= k:
                pairs.append((a, b, coords_of(br)))
    counts = p["counts"]
    _need(int(counts["in_domain_pairs"]) == len(pairs), "feasibility", "in-domain pair count differs")
    for a, b, co in pairs:
        if b < nf:
            img = [[base.norm([]) for _ in range(N)] for _ in range(N)]
            for bb, cb in enumerate(co):
                if cb:
                    src = [[[G1 if rr == cc else G0] for cc in range(N)] for rr in range(N)] if bb == 0 else fixed[bb - 1]
                    img = [[base.add(img[rr][cc], base.scal((cb, F0), src[rr][cc])) for cc in range(N)]
                           for rr in range(N)]
            lhs = _commutator(base, _fixed_image(fixed, a, N), _fixed_image(fixed, b, N))
            _need(all(base.zero(base.sub(lhs[rr][cc], img[rr][cc])) for rr in range(N) for cc in range(N)),
                  "feasibility", "fixed-fixed bracket relation fails")
    verdict = p["verdict"]
    nvars = (len(domain) - nf) * N * N
    _need(int(counts["unknowns"]) == nvars, "feasibility", "unknown count differs")
    linear = _linear_rows(pairs, fixed, N, nf)
    _need(int(counts["linear_equations"]) == len(linear), "feasibility", "linear equation count differs")
    bilinear = [(a, b, co) for a, b, co in pairs if a >= nf]
    _need(int(counts["bilinear_pairs"]) == len(bilinear), "feasibility", "bilinear pair count differs")

    if verdict == "LinearInfeasible":
        y = {int(e): _g(s) for e, s in p["dual"].items()}
        comb: dict = {}
        rhs = G0
        for e, ye in y.items():
            _need(0 <= e < len(linear), "feasibility", "dual index out of range")
            row, b = linear[e]
            for var, cf in row.items():
                comb[var] = _gadd(comb.get(var, G0), _gmul(ye, cf))
            rhs = _gadd(rhs, _gmul(ye, b))
        _need(all(x == G0 for x in comb.values()) and rhs == G1, "feasibility",
              "dual vector does not combine the constraints into 0 = 1")
        v.note(f"dual combination of {len(y)} linear constraints yields 0 = 1")
        return

    if verdict == "Feasible":
        mod = p["field"]["modulus"]
        ext = _Ext(None if mod is None else [_g(s) for s in mod])
        if mod is not None:
            _need(len(mod) >= 3 and _g(mod[-1]) == G1, "feasibility", "modulus must be monic of degree >= 2")
            _need(_irreducible_hint(mod), "feasibility", "modulus has a root in Q(i); use the base field")
        free = [_mat_ext(ext, m) for m in p["free_images"]]
        _need(len(free) == len(domain) - nf, "feasibility", "wrong number of free images")
        _need(all(len(m) == N and all(len(r_) == N for r_ in m) for m in free), "feasibility", "bad matrix shape")
        lifted = [[[ext.norm(e) for e in row] for row in m] for m in fixed]

        def image(a):
            if a == 0:
                return [[ext.norm([G1 if rr == cc else G0]) for cc in range(N)] for rr in range(N)]
            if a < nf:
                return lifted[a - 1]
            return free[a - nf]

        for a, b, co in pairs:
            lhs = _commutator(ext, image(a), image(b))
            for rr in range(N):
                for cc in range(N):
                    acc = lhs[rr][cc]
                    for bb, cb in enumerate(co):
                        if cb:
                            acc = ext.sub(acc, ext.scal((cb, F0), image(bb)[rr][cc]))
                    _need(ext.zero(acc), "feasibility",
                          f"Q({{d{a},d{b}}}) != [Q(d{a}),Q(d{b})] at entry ({rr},{cc})")
        field_ = "Q(i)" if mod is None else f"Q(i)[u]/(degree-{len(mod) - 1} modulus)"
        v.note(f"explicit Q over {field_}: all {len(pairs)} in-domain relations hold exactly")
        return

    if verdict == "ResidualObstruction":
        if "unique_linear_solution" in p:
            x0 = [_g(s) for s in p["unique_linear_solution"]]
            _need(len(x0) == nvars, "feasibility", "solution length differs")
            _check_solves(linear, x0)
            rank = _rank([{var: _GField(cf) for var, cf in row.items()} for row, _ in linear])
            _need(rank == nvars, "feasibility", f"linear part has rank {rank} < {nvars}: solution not unique")
            a, b = (int(x) for x in p["constraint"]["indices"])
            co = next((c for aa, bb, c in bilinear if (aa, bb) == (a, b)), None)
            _need(co is not None, "feasibility", "named constraint is not an in-domain bilinear pair")
            res = _residual_at(x0, a, b, co, fixed, N, nf)
            claimed = [[_g(s) for s in row] for row in p["residual"]]
            _need(res == claimed, "feasibility", "residual matrix does not match")
            _need(any(x != G0 for row in res for x in row), "feasibility", "residual is zero")
            v.note(f"linear part has the unique solution; bilinear pair {p['constraint']['pair']} leaves a nonzero residual")
            return
        par = p["parametrization"]
        x0 = [_g(s) for s in par["x0"]]
        null = []
        for nb in par["null_basis"]:
            vec = [G0] * nvars
            for key, s in nb.items():
                vec[int(key)] = _g(s)
            null.append(vec)
        _check_solves(linear, x0)
        for vec in null:
            _check_solves([(row, G0) for row, _ in linear], vec)
        d = len(null)
        rank = _rank([{var: _GField(cf) for var, cf in row.items()} for row, _ in linear])
        nrank = _rank([{i: _GField(x) for i, x in enumerate(vec)} for vec in null])
        _need(rank + d == nvars and nrank == d, "feasibility", "parametrization does not cover the solution set")
        resid = _param_residuals(x0, null, bilinear, fixed, N, nf)
        claimed = [_ppoly(rp) for rp in p["residual_polys"]]
        _need(resid == claimed, "feasibility", "residual polynomials do not match")
        cof = [_ppoly(c) for c in p["cofactors"]]
        _need(len(cof) == len(resid), "feasibility", "cofactor count differs")
        tot: dict = {}
        for cpoly, rpoly in zip(cof, resid):
            for e1, c1 in cpoly.items():
                for e2, c2 in rpoly.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    tot[e] = _gadd(tot.get(e, G0), _gmul(c1, c2))
        tot = {e: c for e, c in tot.items() if c != G0}
        _need(tot == {(0,) * d: G1}, "feasibility", "cofactor combination is not 1")
        v.note(f"{d}-parameter solution family; residual ideal contains 1 (explicit cofactors)")
        return
    _fail("feasibility", f"verdict {verdict!r} carries no checkable witness")


def _fixed_image(fixed, a, N):
    if a == 0:
        return [[[G1 if r == c else G0] for c in range(N)] for r in range(N)]
    return fixed[a - 1]


def _irreducible_hint(mod) -> bool:
    # only degree-2 moduli are tested for a Q(i)-root via the discriminant
    if len(mod) != 3:
        return True
    c0, c1 = _g(mod[0]), _g(mod[1])
    disc = _gsub(_gmul(c1, c1), _gmul((Fraction(4), F0), c0))
    return not _is_square(disc)


def _is_square(z) -> bool:
    """Is the Gaussian rational ``z`` a square in Q(i)?"""
    a, b = z
    nrm = a * a + b * b
    s = _qsqrt(nrm)
    if s is None:
        return False
    # z = (x + iy)^2 needs x^2 = (|z| + a)/2 and y^2 = (|z| - a)/2 both rational squares
    return _qsqrt((s + a) / 2) is not None and _qsqrt((s - a) / 2) is not None


def _qsqrt(x: Fraction):
    if x < 0:
        return None
    from math import isqrt
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    return Fraction(rp, rq) if rp * rp == p and rq * rq == q else None


def _expander(domain: list, mons: list):
    """Coordinates of a polynomial in the domain basis, by elimination."""
    n = len(mons)
    aug = [_coord(f, mons) for f in domain]  # rows = basis vectors
    # invert the square matrix with columns = basis vectors
    m = [[aug[c][r] for c in range(n)] + [F1 if r == k else F0 for k in range(n)] for r in range(n)]
    for i in range(n):
        p = next(r for r in range(i, n) if m[r][i])
        m[i], m[p] = m[p], m[i]
        inv = 1 / m[i][i]
        m[i] = [x * inv for x in m[i]]
        for r in range(n):
            if r != i and m[r][i]:
                f = m[r][i]
                m[r] = [x - f * y for x, y in zip(m[r], m[i])]
    inv = [row[n:] for row in m]

    def coords(f: dict) -> list:
        vec = _coord(f, mons)
        return [sum((inv[r][c] * vec[c] for c in range(n) if vec[c]), F0) for r in range(n)]

    return coords


def _linear_rows(pairs, fixed, N, nf):
    rows = []
    for a, b, co in pairs:
        if b < nf or a >= nf:
            continue
        F = _fixed_image(fixed, a, N)
        g = b - nf
        for r in range(N):
            for c in range(N):
                row: dict = {}
                for s in range(N):
                    if F[r][s][0] != G0:
                        var = (g * N + s) * N + c
                        row[var] = _gadd(row.get(var, G0), F[r][s][0])
                    if F[s][c][0] != G0:
                        var = (g * N + r) * N + s
                        row[var] = _gsub(row.get(var, G0), F[s][c][0])
                rhs = G0
                for bb, cb in enumerate(co):
                    if not cb:
                        continue
                    if bb < nf:
                        rhs = _gadd(rhs, _gmul((cb, F0), _fixed_image(fixed, bb, N)[r][c][0]))
                    else:
                        var = ((bb - nf) * N + r) * N + c
                        row[var] = _gsub(row.get(var, G0), (cb, F0))
                rows.append(({k: x for k, x in row.items() if x != G0}, rhs))
    return rows


def _check_solves(linear, x) -> None:
    for row, rhs in linear:
        acc = G0
        for var, cf in row.items():
            acc = _gadd(acc, _gmul(cf, x[var]))
        _need(acc == rhs, "feasibility", "claimed vector does not solve the linear constraints")


def _residual_at(x, a, b, co, fixed, N, nf):
    def img(idx):
        if idx < nf:
            return [[e[0] for e in row] for row in _fixed_image(fixed, idx, N)]
        g = idx - nf
        return [[x[(g * N + r) * N + c] for c in range(N)] for r in range(N)]

    A, B = img(a), img(b)
    out = []
    for r in range(N):
        row = []
        for c in range(N):
            acc = G0
            for s in range(N):
                acc = _gadd(acc, _gsub(_gmul(A[r][s], B[s][c]), _gmul(B[r][s], A[s][c])))
            for bb, cb in enumerate(co):
                if cb:
                    acc = _gsub(acc, _gmul((cb, F0), img(bb)[r][c]))
            row.append(acc)
        out.append(row)
    return out


def _param_residuals(x0, null, bilinear, fixed, N, nf):
    d = len(null)

    def entry(idx, r, c):
        if idx < nf:
            z = _fixed_image(fixed, idx, N)[r][c][0]
            return {(0,) * d: z} if z != G0 else {}
        var = ((idx - nf) * N + r) * N + c
        out = {(0,) * d: x0[var]} if x0[var] != G0 else {}
        for i, nb in enumerate(null):
            if nb[var] != G0:
                out[tuple(int(t == i) for t in range(d))] = nb[var]
        return out

    def mul(p, q):
        out: dict = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = _gadd(out.get(e, G0), _gmul(c1, c2))
        return out

    def add(p, q, s=G1):
        out = dict(p)
        for e, c in q.items():
            out[e] = _gadd(out.get(e, G0), _gmul(s, c))
        return out

    res = []
    for a, b, co in bilinear:
        for r in range(N):
            for c in range(N):
                acc: dict = {}
                for s in range(N):
                    acc = add(acc, mul(entry(a, r, s), entry(b, s, c)))
                    acc = add(acc, mul(entry(b, r, s), entry(a, s, c)), (-F1, F0))
                for bb, cb in enumerate(co):
                    if cb:
                        acc = add(acc, entry(bb, r, c), (-cb, F0))
                acc = {e: v for e, v in acc.items() if v != G0}
                if acc:
                    res.append(acc)
    return res


def _ppoly(items) -> dict:
    return {tuple(int(x) for x in e): _g(s) for e, s in items}


# ---------------------------------------------------------------------------
# entry points

_CHECKS = {
    Kind.DERIVED_IDEAL: _check_derived_ideal,
    Kind.BRACKET_DECOMPOSITION: _check_bracket_decomposition,
    Kind.GRAM_POSITIVITY: _check_gram,
    Kind.AD_INVARIANCE: _check_ad_invariance,
    Kind.MINIMALITY: _check_minimality,
    Kind.TRIVIAL_PREQUANTIZATION: _check_trivial_preq,
    Kind.FEASIBILITY_VERDICT: _check_feasibility,
}


def verify(cert: Certificate, recorded_digest: str | None = None, siblings: dict | None = None) -> Verification:
    """Re-check ``cert``; raises CertificateFailure naming the failed step."""
    if recorded_digest is not None and recorded_digest != digest_of(cert.kind.value, cert.payload):
        _fail("digest", "payload does not match the recorded digest (certificate was modified)")
    v = Verification(cert.kind.value)
    try:
        if cert.kind is Kind.TRIVIALITY_CONCLUSION:
            _check_conclusion(cert.payload, v, siblings)
        else:
            _CHECKS[cert.kind](cert.payload, v)
    except CertificateFailure:
        raise
    except (KeyError, TypeError, ValueError, IndexError, ZeroDivisionError, StopIteration) as exc:
        _fail("payload", f"malformed payload: {type(exc).__name__}: {exc}")
    cert.checked = True
    return v


def verify_file(path) -> Verification:
    """Verify a certificate file. A conclusion also verifies the
    certificates it references when they sit in the same directory."""
    path = Path(path)
    cert, digest = Certificate.load(path)
    if digest is None:
        raise ParseError(f"{path}: certificate has no digest")
    siblings = None
    if cert.kind is Kind.TRIVIALITY_CONCLUSION:
        siblings = {}
        wanted = set(cert.payload.get("certificates", {}).values())
        for other in sorted(path.parent.glob("*.json")):
            if other == path:
                continue
            try:
                data = json.loads(other.read_text())
            except (OSError, json.JSONDecodeError):
                continue
            if isinstance(data, dict) and data.get("digest") in wanted:
                sub, sd = Certificate.load(other)
                verify(sub, sd)
                siblings[sd] = sub
    return verify(cert, digest, siblings)

"""``nogo`` command line.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import checker, exact
from .certificate import Certificate
from .chain import STEPS, nogo_report
from .errors import CheckFailure, InputError, NotSimple, ParseError
from .liealg import (
    LieAlgebra,
    builtin,
    center,
    from_json,
    is_compact_type,
    is_semisimple,
    killing_form,
)
from .orbit import OrbitPoint, isotropy_decomposition, is_regular, minimality_witness
from .poisson import sphere_ideal
from .probe import feasibility_probe
from .spin import parse_spin

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    builtin: str | None = None
    algebra: Path | None = None
    h: list[Fraction] | None = None
    sphere: Fraction | None = None
    k: int = 4
    j: Fraction | None = None
    out: Path | None = None
    format: str = "text"

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(command=ns.command, builtin=getattr(ns, "builtin", None),
                  algebra=getattr(ns, "algebra", None), out=getattr(ns, "out", None),
                  format=getattr(ns, "format", "text"))
        if getattr(ns, "h", None) is not None:
            cfg.h = _rationals(ns.h)
        if getattr(ns, "sphere", None) is not None:
            cfg.sphere = _rational(ns.sphere)
            if cfg.sphere <= 0:
                raise InputError("--sphere radius must be positive")
        if getattr(ns, "k", None) is not None:
            if ns.k < 0:
                raise InputError("--k must be >= 0")
            cfg.k = ns.k
        if getattr(ns, "j", None) is not None:
            cfg.j = parse_spin(ns.j)
        return cfg


def _rational(s: str) -> Fraction:
    try:
        return exact.q(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {s!r}") from exc


def _rationals(csv: str) -> list[Fraction]:
    return [_rational(x) for x in re.split(r"[,\s]+", csv.strip()) if x]


class Report:
    """Collects lines for text output and a dict for JSON output."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str) -> None:
        self.lines.append(text)

    def emit(self, stream=None) -> None:
        stream = stream or sys.stdout
        if self.fmt == "json":
            stream.write(json.dumps(self.data, indent=1, sort_keys=True) + "\n")
        else:
            stream.write("\n".join(self.lines) + "\n")


def load_algebra(cfg: RunConfig, validate: bool = True) -> LieAlgebra:
    if cfg.builtin and cfg.algebra:
        raise InputError("give either --builtin or --algebra, not both")
    if cfg.builtin:
        return builtin(cfg.builtin)
    if cfg.algebra is None:
        raise InputError("an algebra is required (--builtin NAME or --algebra FILE)")
    try:
        data = json.loads(Path(cfg.algebra).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {cfg.algebra}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{cfg.algebra}: invalid JSON: {exc}") from exc
    if isinstance(data, dict) and "h" in data and "algebra" in data:
        # orbit point file
        if cfg.h is None:
            cfg.h = _rationals(",".join(str(x) for x in data["h"]))
        data = data["algebra"]
        if isinstance(data, str):
            return builtin(data)
    return from_json(data, validate=validate)


# ---------------------------------------------------------------------------
# commands


def cmd_algebra_check(cfg: RunConfig) -> tuple[int, Report]:
    rep = Report(cfg.format)
    L = load_algebra(cfg, validate=False)
    try:
        L.validate()
    except CheckFailure as exc:
        rep.line(f"FAIL  antisymmetry/Jacobi: {exc}")
        rep.data = {"axioms": False, "error": str(exc)}
        return EXIT_FAIL, rep
    K = killing_form(L)
    pos, neg, zero = K.signature()
    ss, cpt = is_semisimple(L), is_compact_type(L)
    z = center(L).dim
    ok = ss and cpt and z == 0
    rep.data = {"dim": L.dim, "axioms": True, "killing_signature": {"+": pos, "-": neg, "0": zero},
                "semisimple": ss, "compact": cpt, "center_dim": z, "ok": ok}
    rep.line(f"algebra with basis {', '.join(L.labels)} (dim {L.dim})")
    rep.line("ok    antisymmetry and Jacobi hold exactly")
    rep.line(f"      Killing signature (+{pos}, -{neg}, 0:{zero})")
    rep.line(f"{'ok  ' if ss else 'FAIL'}  {STEPS['semisimple']}")
    rep.line(f"{'ok  ' if cpt else 'FAIL'}  {STEPS['compact-type']}")
    rep.line(f"{'ok  ' if z == 0 else 'FAIL'}  {STEPS['zero-center']} (dim {z})")
    if ok:
        rep.line("compact semisimple, center 0")
    return (EXIT_OK if ok else EXIT_FAIL), rep


def cmd_orbit(cfg: RunConfig) -> tuple[int, Report]:
    rep = Report(cfg.format)
    L = load_algebra(cfg)
    if cfg.h is None:
        raise InputError("--h is required")
    p = OrbitPoint.of(L, cfg.h)
    if p.is_zero:
        raise InputError("h = 0: the orbit is a single point")
    dec = isotropy_decomposition(p)
    reg = is_regular(p)
    rep.data = {"h": [str(x) for x in p.h], "isotropy_dim": dec.isotropy.dim, "tangent_dim": dec.tangent.dim,
                "orbit_dim": reg.orbit_dim, "regular": reg.regular, "dimension_maximal": reg.dimension_maximal,
                "isotropy_abelian": reg.isotropy_abelian}
    rep.line(f"h = ({', '.join(str(x) for x in p.h)})")
    rep.line(f"Eq 4: isotropy dim {dec.isotropy.dim} + tangent dim {dec.tangent.dim}, direct sum checked")
    rep.line("Eq 5: [b_h, [b,h]] inside [b,h] checked")
    rep.line(f"orbit dim {reg.orbit_dim} (max sampled {reg.max_sampled_dim}); "
             f"isotropy {'abelian' if reg.isotropy_abelian else 'non-abelian'}")
    summary = [f"orbit dim {reg.orbit_dim}", "regular" if reg.regular else "not regular"]
    try:
        cert = minimality_witness(p)
    except NotSimple:
        rep.data["minimal"] = None
        summary.append("algebra not simple, minimality check skipped")
    else:
        checker.verify(cert)
        rep.data["minimal"] = True
        rep.data["rank_chain"] = cert.payload["rank_chain"]
        rep.line(f"Thm 4.3: [b,h] generates b, rank chain {cert.payload['rank_chain']}")
        summary.append("minimal")
        if cfg.out:
            path = _write(cfg.out, "minimality.json", cert)
            rep.data["certificate"] = str(path)
            rep.line(f"wrote {path}")
    rep.line(", ".join(summary))
    return EXIT_OK, rep


def _write(out: Path, name: str, cert: Certificate) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    return cert.save(out / name)


CERT_FILES = {
    "AdInvariance": "ad_invariance.json",
    "DerivedIdeal": "derived_ideal.json",
    "GramPositivity": "gram_positivity.json",
    "TrivialityConclusion": "triviality_conclusion.json",
}


def cmd_certify(cfg: RunConfig) -> tuple[int, Report]:
    rep = Report(cfg.format)
    L = load_algebra(cfg, validate=False)
    try:
        ideal = sphere_ideal(L, cfg.sphere) if cfg.sphere is not None else None
    except InputError:
        # no sphere for this algebra; still report an earlier structural failure
        result = nogo_report(L, cfg.k, None)
        if result.ok or result.failed_step.name == "derived-ideal":
            raise
    else:
        result = nogo_report(L, cfg.k, ideal)
    rep.data = {"k": cfg.k, "sphere": None if cfg.sphere is None else str(cfg.sphere),
                "steps": [{"name": s.name, "ok": s.ok, "detail": s.detail} for s in result.steps]}
    for s in result.steps:
        rep.line(f"{'ok  ' if s.ok else 'FAIL'}  {s.name}: {s.statement}  [{s.detail}]")
    if not result.ok:
        bad = result.failed_step
        rep.line(f"chain stops at step '{bad.name}': {bad.detail}")
        rep.data["failed_step"] = bad.name
        return EXIT_FAIL, rep
    out = Path(cfg.out or "certificates")
    paths = []
    for c in result.certificates + [result.conclusion]:
        paths.append(str(_write(out, CERT_FILES[c.kind.value], c)))
    rep.data["certificates"] = paths
    rep.line("conclusion: " + result.conclusion.payload["statement"])
    rep.line("machine-checked at k = %d: %s" % (cfg.k, ", ".join(s.name for s in result.steps)))
    for c in result.conclusion.payload["cited"]:
        rep.line(f"cited, not computed: {c}")
    for p in paths:
        rep.line(f"wrote {p}")
    return EXIT_OK, rep


def cmd_verify(path: Path, fmt: str) -> tuple[int, Report]:
    rep = Report(fmt)
    if not Path(path).exists():
        raise InputError(f"no such file: {path}")
    try:
        v = checker.verify_file(path)
    except CheckFailure as exc:
        rep.data = {"file": str(path), "valid": False, "error": str(exc)}
        rep.line(f"INVALID {path}: {exc}")
        return EXIT_FAIL, rep
    rep.data = {"file": str(path), "valid": True, "kind": v.kind, "checks": v.checks}
    rep.line(f"VALID {v.kind} certificate {path}")
    for c in v.checks:
        rep.line(f"  {c}")
    return EXIT_OK, rep


def cmd_probe(cfg: RunConfig) -> tuple[int, Report]:
    rep = Report(cfg.format)
    if cfg.j is None:
        raise InputError("--j is required")
    k = cfg.k
    cert = feasibility_probe(cfg.j, k, radius=cfg.sphere or 1)
    checker.verify(cert)
    p = cert.payload
    out = Path(cfg.out or "certificates")
    name = f"probe_j{str(cfg.j).replace('/', '_')}_k{k}.json"
    path = _write(out, name, cert)
    rep.data = {"j": p["j"], "k_domain": k, "verdict": p["verdict"], "counts": p["counts"],
                "field": p.get("field"), "certificate": str(path)}
    rep.line(f"spin j = {p['j']} (N = {p['N']}), domain P^{k} on the sphere r = {p['radius']}")
    rep.line("constraints: {in_domain_pairs} in-domain pairs, {linear_equations} linear equations, "
             "{bilinear_pairs} bilinear pairs, {unknowns} unknowns".format(**p["counts"]))
    if cfg.j == 0:
        rep.line("N = 1: Q(x_i) = 0 and every image is a scalar, so this degenerates to "
                 "the trivial prequantization f -> mean(f)")
    verdict = p["verdict"]
    if verdict == "Feasible":
        mod = p["field"]["modulus"]
        where = "Q(i)" if mod is None else f"Q(i)[u]/(m), m of degree {len(mod) - 1}"
        rep.line(f"verdict: Feasible (explicit Q over {where}, all residuals zero)")
    elif verdict == "ResidualObstruction":
        pair = p.get("constraint", {}).get("pair")
        rep.line("verdict: ResidualObstruction" + (f" at bilinear pair {{{pair[0]}, {pair[1]}}}" if pair else ""))
    else:
        rep.line(f"verdict: {verdict}")
    rep.line(f"certificate {path} (re-verified)")
    return EXIT_OK, rep


# ---------------------------------------------------------------------------
# argument parsing


def _algebra_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--builtin", metavar="NAME", help="su2, so3, so4, sl2r, suN, abelianN or A+B")
    g.add_argument("--algebra", metavar="FILE", type=Path, help="algebra or orbit-point JSON")


def _format_arg(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nogo", description="Exact Lie-Poisson checks and no-go certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="algebra operations")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    chk = alg_sub.add_parser("check", help="structural checks")
    _algebra_args(chk)
    _format_arg(chk)

    orb = sub.add_parser("orbit", help="isotropy, regularity and minimality at h")
    _algebra_args(orb)
    orb.add_argument("--h", metavar="CSV", help="comma-separated rationals")
    orb.add_argument("--out", type=Path)
    _format_arg(orb)

    cert = sub.add_parser("certify", help="run the no-go chain and write certificates")
    _algebra_args(cert)
    cert.add_argument("--sphere", metavar="R", help="quotient by the sphere(s) of radius R")
    cert.add_argument("--k", type=int, default=4)
    cert.add_argument("--out", type=Path)
    _format_arg(cert)

    ver = sub.add_parser("verify", help="independently re-check a certificate file")
    ver.add_argument("file", type=Path)
    _format_arg(ver)

    pr = sub.add_parser("probe", help="quantization-ansatz feasibility on the sphere")
    pr.add_argument("--j", required=True, help="spin, e.g. 1/2")
    pr.add_argument("--k", type=int, default=2, help="domain degree (2 or 3)")
    pr.add_argument("--sphere", metavar="R", help="sphere radius (default 1)")
    pr.add_argument("--out", type=Path)
    _format_arg(pr)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = RunConfig.from_args(ns)
        if ns.command == "algebra":
            code, rep = cmd_algebra_check(cfg)
        elif ns.command == "orbit":
            code, rep = cmd_orbit(cfg)
        elif ns.command == "certify":
            code, rep = cmd_certify(cfg)
        elif ns.command == "verify":
            code, rep = cmd_verify(ns.file, cfg.format)
        else:
            code, rep = cmd_probe(cfg)
    except InputError as exc:
        print(f"nogo: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CheckFailure as exc:
        print(f"nogo: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rep.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())

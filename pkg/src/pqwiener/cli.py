"""Command-line front end.

Every command prints a ``# pqwiener <version>`` header line followed by its
payload.  Exit codes: 0 success, 1 failed check, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from fractions import Fraction

from . import __version__
from .base import Config, ZpPoint
from .cyclo import CycloNum
from .dualgroup import parse_phat
from .fourier import (
    DualFn,
    LCFn,
    conv_dual,
    conv_zp,
    fourier_fwd,
    fourier_inv,
    haar_integral,
    norm_dual_sup,
    norm_fn,
    parseval,
)
from .measures import MeasureHat, aq_partial_closed, mu_tilde, value_attainment_scan
from .qadic import PrecisionError, vq_rational
from .wtt import PreconditionError, nondensity_witness, wtt_continuous_check

HEADER = f"# pqwiener {__version__}"


class InputError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, message: str, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e


def load_json(path: str | None, label: str = "input"):
    """Parse JSON, blanking '#' header lines so reported line numbers stay true."""
    text = _read_text(path)
    lines = ["" if ln.lstrip().startswith("#") else ln for ln in text.split("\n")]
    try:
        return json.loads("\n".join(lines))
    except json.JSONDecodeError as e:
        raise InputError(f"{label if path in (None, '-') else path}: line {e.lineno}, column {e.colno}: {e.msg}") from e


def _emit(obj) -> None:
    print(HEADER)
    print(json.dumps(obj, indent=2, sort_keys=False))


def _point(text: str, p: int) -> ZpPoint:
    try:
        return ZpPoint.parse(text, p)
    except ValueError as e:
        raise InputError(f"bad point {text!r}: {e}") from e


def _config(args) -> Config:
    try:
        return Config(args.p, args.q, args.precision, max(args.level, 1))
    except ValueError as e:
        raise InputError(str(e)) from e


# -- commands ------------------------------------------------------------------------


def cmd_field_info(args, cfg: Config) -> int:
    N = cfg.max_level if args.N is None else args.N
    ctx = cfg.field(N)
    info = ctx.to_json()
    info["zeta_image"] = [str(c) for c in ctx.zeta_image.residues()]
    _emit(info)
    return 0


def cmd_transform(args, cfg: Config) -> int:
    f = _parse(LCFn.from_json, load_json(args.input), cfg.p)
    _emit(fourier_fwd(f).to_json())
    return 0


def cmd_inverse(args, cfg: Config) -> int:
    F = _parse(DualFn.from_json, load_json(args.input), cfg.p)
    _emit(fourier_inv(F).to_json())
    return 0


def cmd_convolve(args, cfg: Config) -> int:
    if args.domain == "zp":
        a = _parse(LCFn.from_json, load_json(args.a), cfg.p)
        b = _parse(LCFn.from_json, load_json(args.b), cfg.p)
        _emit(conv_zp(a, b).to_json())
    else:
        a = _parse(DualFn.from_json, load_json(args.a), cfg.p)
        b = _parse(DualFn.from_json, load_json(args.b), cfg.p)
        _emit(conv_dual(a, b).to_json())
    return 0


def _parse(fn, obj, p):
    try:
        return fn(obj, p)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"malformed payload: {e}") from e


def _random_fn(rng: random.Random, p: int, N: int) -> LCFn:
    return LCFn(p, [Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(p**N)])


def suite_fourier(cfg: Config, rng: random.Random, count: int) -> str:
    p, ctx = cfg.p, cfg.field(cfg.max_level)
    for _ in range(count):
        f = _random_fn(rng, p, rng.randint(0, cfg.max_level))
        g = _random_fn(rng, p, rng.randint(0, cfg.max_level))
        F, G = fourier_fwd(f), fourier_fwd(g)
        if fourier_inv(F) != f:
            raise CheckFailed("round-trip failed", f.to_json())
        if fourier_fwd(f * g) != conv_dual(F, G) or fourier_fwd(conv_zp(f, g)) != F * G:
            raise CheckFailed("homomorphism failed", {"f": f.to_json(), "g": g.to_json()})
        if parseval(f, g) != haar_integral(f * g):
            raise CheckFailed("parseval failed", {"f": f.to_json(), "g": g.to_json()})
        if norm_fn(f, ctx) != norm_dual_sup(F, ctx):
            raise CheckFailed("isometry failed", f.to_json())
    return "round-trip OK, homomorphism OK, parseval OK, isometry OK"


def suite_aq(cfg: Config, rng: random.Random, count: int) -> str:
    if cfg.p != 2:
        raise InputError("the aq suite needs --p 2")
    mu = MeasureHat.aq(cfg.q)
    top = min(cfg.max_level, 8)
    for N in range(top + 1):
        for z in range(2**N):
            s = mu_tilde(mu, z, N, method="sum").as_rational()
            if s != aq_partial_closed(z, N, cfg.q):
                raise CheckFailed("partial-sum identity failed", {"z": z, "N": N})
    return f"partial-sum identity OK for N <= {top}"


def suite_wtt(cfg: Config, rng: random.Random, count: int) -> str:
    p = cfg.p
    for _ in range(count):
        N = rng.randint(0, min(cfg.max_level, 2))
        chi = LCFn(p, [rng.choice([0, 0, 1, 2, cfg.q, Fraction(1, 2)]) for _ in range(p**N)])
        rep = wtt_continuous_check(chi)
        if not rep.consistent:
            raise CheckFailed("four-way agreement failed", chi.to_json())
    return "four-way agreement OK"


SUITES = {"fourier": suite_fourier, "aq": suite_aq, "wtt": suite_wtt}


def cmd_verify(args, cfg: Config) -> int:
    rng = random.Random(args.seed)
    summary = SUITES[args.suite](cfg, rng, args.count)
    print(HEADER)
    print(summary)
    return 0


def aq_rows(z: ZpPoint, N_max: int, q: int, check_level: int = 8) -> list[dict]:
    """Rows (z, N, S_N, v_q(S_{N+1} - S_N)) for N < N_max, the t-sum cross-checked where cheap."""
    mu = MeasureHat.aq(q)
    rows = []
    for N in range(N_max):
        s = aq_partial_closed(z, N, q)
        if N <= check_level and mu_tilde(mu, z, N, method="sum").as_rational() != s:
            raise CheckFailed("closed form disagrees with the t-sum", {"z": str(z), "N": N})
        inc = aq_partial_closed(z, N + 1, q) - s
        v = vq_rational(inc, q)
        rows.append({"z": str(z), "N": N, "value_num": s.numerator, "value_den": s.denominator,
                     "increment_valuation": None if v == math.inf else v})
    return rows


def cmd_aq(args, cfg: Config) -> int:
    if cfg.p != 2:
        raise InputError("aq needs --p 2")
    z = _point(args.z, 2)
    rows = aq_rows(z, args.N, cfg.q, check_level=min(cfg.max_level, 8))
    if args.emit == "json":
        _emit({"q": cfg.q, "rows": rows})
        return 0
    print(HEADER)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["z", "N", "value_num", "value_den", "increment_valuation"], lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    sys.stdout.write(buf.getvalue())
    return 0


def cmd_wtt_check(args, cfg: Config) -> int:
    chi = _parse(LCFn.from_json, load_json(args.input), cfg.p)
    rep = wtt_continuous_check(chi)
    _emit(rep.to_json())
    return 0 if rep.consistent else 1


def _measure(path: str, p: int) -> MeasureHat:
    obj = load_json(path, "measure")
    try:
        return MeasureHat.from_json(obj, p)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed measure: {e}") from e


def _value(text: str, p: int) -> CycloNum:
    try:
        return CycloNum.from_json(text, p)
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad value {text!r}: {e}") from e


def cmd_witness(args, cfg: Config) -> int:
    mu = _measure(args.measure, cfg.p)
    z0 = _point(args.z0, cfg.p)
    try:
        raw = json.loads(args.combo)
        combo = [(_value(str(e["coeff"]), cfg.p), parse_phat(str(e["shift"]), cfg.p)) for e in raw]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"bad combo: {e}") from e
    try:
        w = nondensity_witness(mu, z0, combo, cfg)
    except PreconditionError as e:
        raise CheckFailed(str(e), {"z0": z0.to_json()}) from e
    _emit(w.to_json())
    return 0 if w.verdict and w.identity_ok else 1


def cmd_scan(args, cfg: Config) -> int:
    mu = _measure(args.measure, cfg.p)
    c = _value(args.c, cfg.p)
    cands = [_point(s, cfg.p) for s in args.candidates]
    rep = value_attainment_scan(mu, c, cands, args.N_max, cfg)
    if args.emit == "json":
        _emit(rep.to_json())
        return 0
    print(HEADER)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["z", "topology", "limit", "attained", "verdict"])
    for r in rep.rows:
        lim = "" if r.limit is None else str(r.limit.value)
        top = "" if r.limit is None else r.limit.topology
        w.writerow([str(r.z), top, lim, str(r.attained).lower(), r.cauchy.verdict])
    sys.stdout.write(buf.getvalue())
    print(f"# conclusion: {rep.conclusion}")
    return 0


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="the prime p of Z_p (default 2)")
    common.add_argument("--q", type=int, default=5, help="the prime q of the value field (default 5)")
    common.add_argument("--precision", type=int, default=64, help="q-adic digits carried (default 64)")
    common.add_argument("--level", type=int, default=8, help="largest conductor exponent N (default 8)")

    ap = argparse.ArgumentParser(prog="pqwiener", description="(p,q)-adic Fourier analysis and Tauberian checks.")
    ap.add_argument("--version", action="version", version=f"pqwiener {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("field-info", parents=[common], help="show the embedding used for Q(zeta_{p^N})")
    s.add_argument("--N", type=int, default=None)
    s.set_defaults(func=cmd_field_info)

    s = sub.add_parser("transform", parents=[common], help="Fourier transform of an LCFn JSON")
    s.add_argument("input", nargs="?")
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("inverse", parents=[common], help="inverse transform of a DualFn JSON")
    s.add_argument("input", nargs="?")
    s.set_defaults(func=cmd_inverse)

    s = sub.add_parser("convolve", parents=[common], help="convolve two functions")
    s.add_argument("--domain", choices=["zp", "dual"], required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("verify", parents=[common], help="run an identity-verification suite")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--count", type=int, default=25)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("aq", parents=[common], help="partial sums of the A_q series at a point of Z_2")
    s.add_argument("--z", required=True, help="a decimal integer or pre:period digits, e.g. :1 for -1")
    s.add_argument("--N", type=int, required=True, help="number of rows")
    s.add_argument("--emit", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_aq)

    s = sub.add_parser("wtt-check", parents=[common], help="finite-level continuous Tauberian check of an LCFn JSON")
    s.add_argument("input", nargs="?")
    s.set_defaults(func=cmd_wtt_check)

    s = sub.add_parser("witness", parents=[common], help="non-density certificate for a measure")
    s.add_argument("--measure", required=True, help="measure JSON file")
    s.add_argument("--z0", required=True)
    s.add_argument("--combo", default='[{"coeff": "1", "shift": "0"}]', help='JSON list of {"coeff", "shift"}')
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("scan", parents=[common], help="look for points where a measure's limit equals c")
    s.add_argument("--measure", required=True)
    s.add_argument("--c", required=True)
    s.add_argument("--candidates", nargs="+", required=True)
    s.add_argument("--N-max", dest="N_max", type=int, default=8)
    s.add_argument("--emit", choices=["csv", "json"], default="csv")
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CheckFailed as e:
        print(f"check failed: {e}", file=sys.stderr)
        if e.counterexample is not None:
            print(json.dumps(e.counterexample), file=sys.stderr)
        return 1
    except PrecisionError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
